use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of variable names. Polynomials only combine with
/// polynomials of an equal context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ctx {
    vars: Arc<[String]>,
}

impl Ctx {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Self {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            assert!(
                !vars[..i].contains(v),
                "duplicate variable `{v}` in context"
            );
        }
        Ctx { vars: vars.into() }
    }

    pub fn empty() -> Self {
        Ctx::new::<&str>(&[])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Concatenation `self ++ other`. Panics on duplicate names.
    pub fn join(&self, other: &Ctx) -> Ctx {
        let mut v: Vec<String> = self.vars.to_vec();
        v.extend(other.vars.iter().cloned());
        Ctx::new(&v)
    }

    /// Context with the listed variables removed.
    pub fn without(&self, names: &[&str]) -> Ctx {
        let v: Vec<&String> = self
            .vars
            .iter()
            .filter(|v| !names.contains(&v.as_str()))
            .collect();
        Ctx::new(&v)
    }

    pub fn same(&self, other: &Ctx) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    pub(crate) fn check(&self, other: &Ctx) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.vars.join(","),
                right: other.vars.join(","),
            })
        }
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ctx{:?}", &*self.vars)
    }
}
