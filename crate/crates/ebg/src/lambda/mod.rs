//! The lambda front end: abstract syntax, runtime values and the normal-order
//! reference interpreter.
//!
//! Evaluation is lazy: an application never evaluates its argument up front.
//! Instead the argument expression is captured together with the current
//! environment as a [`Value::Thunk`] and only evaluated when a variable
//! reference demands it. The reference interpreter deliberately does not
//! memoize thunks; a variable referenced twice re-evaluates its thunk body
//! twice. The compiled pipelines do memoize, and for pure terms the observable
//! results coincide.

mod parser;

pub use parser::{parse_term, ParseError};

use std::fmt;
use std::rc::Rc;

use crate::env::Env;
use crate::fuel::{Fuel, FuelExhausted};

/// Identifiers reserved for the runtime encodings; the parser rejects them as
/// variable names so that source programs cannot collide with the value-class
/// library or the frame register.
pub const RESERVED_IDENTIFIERS: &[&str] = &[
    "package", "import", "def", "Value", "IntVal", "Closure", "Thunk", "Frame", "null", "frame",
    "this",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Int(i64),
    Var(String),
    Lam(String, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    /// A qualified reference `Package.name`. Only produced where a qualified
    /// name was written (or resolved) in source; pure lambda terms never
    /// contain one.
    Global(String, String),
}

impl Term {
    pub fn int(n: i64) -> Term {
        Term::Int(n)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(param: impl Into<String>, body: Term) -> Term {
        Term::Lam(param.into(), Rc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Rc::new(fun), Rc::new(arg))
    }

    pub fn global(package: impl Into<String>, name: impl Into<String>) -> Term {
        Term::Global(package.into(), name.into())
    }

    /// Node count of the AST.
    pub fn size(&self) -> usize {
        match self {
            Term::Int(_) | Term::Var(_) | Term::Global(_, _) => 1,
            Term::Lam(_, body) => 1 + body.size(),
            Term::App(fun, arg) => 1 + fun.size() + arg.size(),
        }
    }

    pub fn contains_global(&self) -> bool {
        match self {
            Term::Global(_, _) => true,
            Term::Int(_) | Term::Var(_) => false,
            Term::Lam(_, body) => body.contains_global(),
            Term::App(fun, arg) => fun.contains_global() || arg.contains_global(),
        }
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(term: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match term {
                Term::Int(_) | Term::Global(_, _) => {}
                Term::Var(name) => {
                    if !bound.iter().any(|b| b == name) && !out.iter().any(|o| o == name) {
                        out.push(name.clone());
                    }
                }
                Term::Lam(param, body) => {
                    bound.push(param.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                Term::App(fun, arg) => {
                    walk(fun, bound, out);
                    walk(arg, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Term {
    /// Canonical concrete syntax. Application is rendered left-associative
    /// with minimal parentheses; abstraction bodies extend to the right.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(term: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match term {
                Term::Int(_) | Term::Var(_) | Term::Global(_, _) => write!(f, "{term}"),
                _ => write!(f, "({term})"),
            }
        }
        match self {
            Term::Int(n) => write!(f, "{n}"),
            Term::Var(name) => write!(f, "{name}"),
            Term::Global(package, name) => write!(f, "{package}.{name}"),
            Term::Lam(param, body) => write!(f, "\\{param}. {body}"),
            Term::App(fun, arg) => {
                match **fun {
                    // Left-nested applications need no parentheses.
                    Term::App(_, _) => write!(f, "{fun}")?,
                    _ => atom(fun, f)?,
                }
                write!(f, " ")?;
                atom(arg, f)
            }
        }
    }
}

pub type ValueEnv = Env<String, Value>;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Closure {
        param: String,
        env: ValueEnv,
        body: Rc<Term>,
    },
    Thunk {
        env: ValueEnv,
        body: Rc<Term>,
    },
    Error,
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }
}

/// Supplier of top-level definitions for qualified references. In source-only
/// mode this is backed by parsed package files; the pure calculus uses
/// [`NoGlobals`].
pub trait GlobalSource {
    fn global_term(&mut self, package: &str, name: &str) -> Option<Rc<Term>>;
}

pub struct NoGlobals;

impl GlobalSource for NoGlobals {
    fn global_term(&mut self, _package: &str, _name: &str) -> Option<Rc<Term>> {
        None
    }
}

/// Normal-order evaluation of a pure term. One fuel unit is consumed per
/// recursive call.
pub fn eval(term: &Term, env: &ValueEnv, fuel: &mut Fuel) -> Result<Value, FuelExhausted> {
    eval_with(term, env, fuel, &mut NoGlobals)
}

/// Normal-order evaluation with a resolver for qualified references. A global
/// resolves to its defining term, evaluated in the empty environment; the
/// reference interpreter re-evaluates it on every reference.
pub fn eval_with(
    term: &Term,
    env: &ValueEnv,
    fuel: &mut Fuel,
    globals: &mut dyn GlobalSource,
) -> Result<Value, FuelExhausted> {
    fuel.tick()?;
    match term {
        Term::Int(n) => Ok(Value::Int(*n)),
        Term::Lam(param, body) => Ok(Value::Closure {
            param: param.clone(),
            env: env.clone(),
            body: body.clone(),
        }),
        Term::App(fun, arg) => {
            let fun_value = eval_with(fun, env, fuel, globals)?;
            let Value::Closure { param, env: closure_env, body } = fun_value else {
                return Ok(Value::Error);
            };
            let thunk = Value::Thunk { env: env.clone(), body: arg.clone() };
            let body_env = Env::pair(closure_env, Env::bind(param, thunk));
            eval_with(&body, &body_env, fuel, globals)
        }
        Term::Var(name) => match env.lookup(name, Value::Error) {
            Value::Thunk { env: thunk_env, body } => eval_with(&body, &thunk_env, fuel, globals),
            _ => Ok(Value::Error),
        },
        Term::Global(package, name) => match globals.global_term(package, name) {
            Some(definition) => eval_with(&definition, &Env::empty(), fuel, globals),
            None => Ok(Value::Error),
        },
    }
}
