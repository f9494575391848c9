//! A small object calculus: nested class definitions with captured contexts,
//! objects as method environments, message passing and an integer-addressed
//! heap threaded through evaluation.
//!
//! Classes are values. Evaluating a class definition captures the current
//! environment as the class context, so a class defined inside a method body
//! closes over that method's variables. Instantiation ties a fixed point: all
//! methods of the new object carry the finished object itself as their
//! receiver.

mod eval;

pub use eval::{
    instantiate, java_eval, send_message, send_message0, send_value, send_value0, Instance,
};

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use crate::env::Env;

/// Heap addresses. Real addresses start at 1; 0 serves as the lookup sentinel
/// for "not bound".
pub type Addr = i64;

/// Variable name to heap address.
pub type Context = Env<String, Addr>;

/// Method-definition table of a class.
pub type MethodDefs = Env<String, MethodDef>;

/// Method table of an instantiated object.
pub type Methods = Env<String, Method>;

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// Sequencing; the first value is discarded, its heap effects kept.
    Seq(Rc<Term>, Rc<Term>),
    Int(i64),
    Var(String),
    /// The ultimate super-class.
    NullClassDef,
    ClassDef {
        super_class: Rc<Term>,
        attributes: Vec<String>,
        methods: MethodDefs,
    },
    New(Rc<Term>),
    Send {
        target: Rc<Term>,
        message: String,
        arg: Rc<Term>,
    },
    Send0 {
        target: Rc<Term>,
        message: String,
    },
    This,
    If {
        cond: Rc<Term>,
        then_branch: Rc<Term>,
        else_branch: Rc<Term>,
    },
    Set(String, Rc<Term>),
    Eql(Rc<Term>, Rc<Term>),
}

impl Term {
    pub fn seq(first: Term, second: Term) -> Term {
        Term::Seq(Rc::new(first), Rc::new(second))
    }

    pub fn int(n: i64) -> Term {
        Term::Int(n)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn class_def(super_class: Term, attributes: &[&str], methods: MethodDefs) -> Term {
        Term::ClassDef {
            super_class: Rc::new(super_class),
            attributes: attributes.iter().map(|s| s.to_string()).collect(),
            methods,
        }
    }

    pub fn new_obj(class_expr: Term) -> Term {
        Term::New(Rc::new(class_expr))
    }

    pub fn send(target: Term, message: impl Into<String>, arg: Term) -> Term {
        Term::Send {
            target: Rc::new(target),
            message: message.into(),
            arg: Rc::new(arg),
        }
    }

    pub fn send0(target: Term, message: impl Into<String>) -> Term {
        Term::Send0 { target: Rc::new(target), message: message.into() }
    }

    pub fn if_(cond: Term, then_branch: Term, else_branch: Term) -> Term {
        Term::If {
            cond: Rc::new(cond),
            then_branch: Rc::new(then_branch),
            else_branch: Rc::new(else_branch),
        }
    }

    pub fn set(name: impl Into<String>, value: Term) -> Term {
        Term::Set(name.into(), Rc::new(value))
    }

    pub fn eql(left: Term, right: Term) -> Term {
        Term::Eql(Rc::new(left), Rc::new(right))
    }

    /// Number of class definitions anywhere in the term, nested ones included.
    pub fn class_def_count(&self) -> usize {
        match self {
            Term::Int(_) | Term::Var(_) | Term::This | Term::NullClassDef => 0,
            Term::Seq(a, b) | Term::Eql(a, b) => a.class_def_count() + b.class_def_count(),
            Term::ClassDef { super_class, methods, .. } => {
                let mut count = 1 + super_class.class_def_count();
                let mut stack = vec![methods];
                while let Some(env) = stack.pop() {
                    match env {
                        Env::Empty => {}
                        Env::Bind(_, def) => count += def.body().class_def_count(),
                        Env::Pair(l, r) => {
                            stack.push(l);
                            stack.push(r);
                        }
                    }
                }
                count
            }
            Term::New(inner) => inner.class_def_count(),
            Term::Send { target, arg, .. } => target.class_def_count() + arg.class_def_count(),
            Term::Send0 { target, .. } => target.class_def_count(),
            Term::If { cond, then_branch, else_branch } => {
                cond.class_def_count()
                    + then_branch.class_def_count()
                    + else_branch.class_def_count()
            }
            Term::Set(_, value) => value.class_def_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodDef {
    Unary { param: String, body: Rc<Term> },
    Nullary { body: Rc<Term> },
}

impl MethodDef {
    pub fn unary(param: impl Into<String>, body: Term) -> MethodDef {
        MethodDef::Unary { param: param.into(), body: Rc::new(body) }
    }

    pub fn nullary(body: Term) -> MethodDef {
        MethodDef::Nullary { body: Rc::new(body) }
    }

    pub fn body(&self) -> &Term {
        match self {
            MethodDef::Unary { body, .. } | MethodDef::Nullary { body } => body,
        }
    }
}

/// Runtime values. Objects and classes compare by identity.
#[derive(Clone)]
pub enum Value {
    NullClass,
    Class(Rc<ClassValue>),
    Object(ObjRef),
    Int(i64),
    Null,
    Bool(bool),
    Error(String),
}

#[derive(Debug, Clone)]
pub struct ClassValue {
    /// Environment captured when the class definition was evaluated.
    pub context: Context,
    /// NullClass or another class value.
    pub super_class: Value,
    pub attributes: Vec<String>,
    pub methods: MethodDefs,
}

/// An instantiated method. Every method of an object carries that same object
/// as its receiver; the cycle is tied at instantiation time.
#[derive(Debug, Clone)]
pub enum Method {
    Unary {
        param: String,
        context: Context,
        receiver: Value,
        body: Rc<Term>,
    },
    Nullary {
        context: Context,
        receiver: Value,
        body: Rc<Term>,
    },
}

impl Method {
    pub fn receiver(&self) -> &Value {
        match self {
            Method::Unary { receiver, .. } | Method::Nullary { receiver, .. } => receiver,
        }
    }
}

/// Shared object cell. The method table is installed once, immediately after
/// instantiation, so that the methods can already refer to the object.
#[derive(Debug)]
pub struct ObjectCell {
    methods: RefCell<Methods>,
}

pub type ObjRef = Rc<ObjectCell>;

impl ObjectCell {
    pub(crate) fn fresh() -> ObjRef {
        Rc::new(ObjectCell { methods: RefCell::new(Env::Empty) })
    }

    pub(crate) fn install(&self, methods: Methods) {
        *self.methods.borrow_mut() = methods;
    }

    /// A snapshot of the method table; cheap, the tree is shared.
    pub fn methods(&self) -> Methods {
        self.methods.borrow().clone()
    }
}

impl Value {
    pub fn object(&self) -> Option<&ObjRef> {
        match self {
            Value::Object(obj) => Some(obj),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Value::Error(_))
    }

    /// The equality used by `Eql`: integers, booleans and null by value,
    /// objects and classes by identity, everything cross-kind unequal.
    pub fn eql(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Null, Value::Null) => true,
            (Value::NullClass, Value::NullClass) => true,
            (Value::Object(a), Value::Object(b)) => Rc::ptr_eq(a, b),
            (Value::Class(a), Value::Class(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NullClass => write!(f, "NullClass"),
            Value::Class(c) => write!(f, "Class@{:p}", Rc::as_ptr(c)),
            // Objects print shallowly; their method tables refer back to the
            // object itself.
            Value::Object(o) => write!(f, "Object@{:p}", Rc::as_ptr(o)),
            Value::Int(n) => write!(f, "Int({n})"),
            Value::Null => write!(f, "Null"),
            Value::Bool(b) => write!(f, "Bool({b})"),
            Value::Error(msg) => write!(f, "Error({msg:?})"),
        }
    }
}

/// The heap: an environment from addresses to values plus the next free
/// address. Writes shadow; the rightmost binding for an address is current.
#[derive(Debug, Clone)]
pub struct Heap {
    cells: Env<Addr, Value>,
    next: Addr,
}

impl Default for Heap {
    fn default() -> Self {
        Heap::new()
    }
}

impl Heap {
    pub fn new() -> Heap {
        Heap { cells: Env::Empty, next: 1 }
    }

    pub fn next_free(&self) -> Addr {
        self.next
    }

    pub fn alloc(self, value: Value) -> (Addr, Heap) {
        let addr = self.next;
        let cells = self.cells.extended(addr, value);
        (addr, Heap { cells, next: addr + 1 })
    }

    /// Overwrites an existing cell by shadowing it.
    pub fn set(self, addr: Addr, value: Value) -> Heap {
        Heap { cells: self.cells.extended(addr, value), next: self.next }
    }

    pub fn get(&self, addr: Addr) -> Option<&Value> {
        self.cells.find(&addr)
    }

    /// Appends an instantiation fragment, advancing the free pointer past it.
    pub fn append_fragment(self, fragment: Env<Addr, Value>) -> Heap {
        let cells_added = fragment.binding_count() as Addr;
        Heap {
            cells: Env::pair(self.cells, fragment),
            next: self.next + cells_added,
        }
    }
}
