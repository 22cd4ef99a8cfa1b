use std::fmt::Display;

/// Collects named checks and keeps the failures.
#[derive(Default)]
pub struct Checks {
    count: usize,
    failures: Vec<String>,
}

impl Checks {
    pub fn ok(&mut self, name: &str, cond: bool, detail: impl Display) {
        self.count += 1;
        if !cond {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    /// `|got - want| <= rel * |want|`, or exact equality when `want` is 0.
    pub fn rel(&mut self, name: &str, got: f64, want: f64, rel: f64) {
        let pass = if want == 0.0 {
            got == 0.0
        } else {
            (got - want).abs() <= rel * want.abs()
        };
        self.ok(name, pass, format!("got {got}, want {want} (rel {rel:e})"));
    }

    pub fn abs(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        self.ok(
            name,
            (got - want).abs() <= tol,
            format!("got {got}, want {want} (abs {tol:e})"),
        );
    }

    pub fn fail(&mut self, name: &str, detail: impl Display) {
        self.ok(name, false, detail);
    }

    /// Unwrap `r`, recording a failure when it is an error.
    pub fn get<T, E: Display>(&mut self, name: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(name, e);
                None
            }
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(self, summary: impl Display) -> Result<String, String> {
        if self.failures.is_empty() {
            Ok(format!("{} checks, {summary}", self.count))
        } else {
            Err(format!(
                "{} of {} checks failed: {}",
                self.failures.len(),
                self.count,
                self.failures.join("; ")
            ))
        }
    }
}
