//! Instantiation, message passing and the heap-threading evaluator.

use std::rc::Rc;

use super::{
    Addr, ClassValue, Context, Heap, Method, MethodDef, Methods, ObjectCell, Term, Value,
};
use crate::env::Env;
use crate::fuel::{Fuel, FuelExhausted};

/// Result of instantiating a class: the method table, the attribute address
/// environment, and the heap fragment holding the freshly allocated attribute
/// cells (all initialized to null).
#[derive(Debug, Clone)]
pub struct Instance {
    pub methods: Methods,
    pub attr_addresses: Context,
    pub fragment: Env<Addr, Value>,
}

impl Instance {
    fn empty() -> Instance {
        Instance {
            methods: Env::Empty,
            attr_addresses: Env::Empty,
            fragment: Env::Empty,
        }
    }
}

fn allocate_attributes(names: &[String], base: Addr) -> (Context, Env<Addr, Value>) {
    let mut addresses = Env::Empty;
    let mut fragment = Env::Empty;
    for (offset, name) in names.iter().enumerate() {
        let addr = base + offset as Addr;
        addresses = addresses.extended(name.clone(), addr);
        fragment = fragment.extended(addr, Value::Null);
    }
    (addresses, fragment)
}

fn method_def_to_method(def: &MethodDef, context: &Context, receiver: &Value) -> Method {
    match def {
        MethodDef::Unary { param, body } => Method::Unary {
            param: param.clone(),
            context: context.clone(),
            receiver: receiver.clone(),
            body: body.clone(),
        },
        MethodDef::Nullary { body } => Method::Nullary {
            context: context.clone(),
            receiver: receiver.clone(),
            body: body.clone(),
        },
    }
}

/// Instantiates a class at `base_address`, using `this` as the receiver of
/// every method. The super-class is instantiated first; extension attributes
/// are allocated after the super's fragment and extension methods are merged
/// on the right, so a sub-class method shadows a super-class one.
pub fn instantiate(class: &Value, base_address: Addr, this: &Value) -> Result<Instance, String> {
    match class {
        Value::NullClass => Ok(Instance::empty()),
        Value::Class(class) => {
            let ClassValue { context, super_class, attributes, methods } = &**class;
            let sup = instantiate(super_class, base_address, this)?;
            let used = sup.fragment.binding_count() as Addr;
            let (ext_addresses, ext_fragment) = allocate_attributes(attributes, base_address + used);
            let method_context = Env::pair(
                context.clone(),
                Env::pair(sup.attr_addresses.clone(), ext_addresses.clone()),
            );
            let ext_methods =
                methods.map_values(&|def| method_def_to_method(def, &method_context, this));
            Ok(Instance {
                methods: Env::pair(sup.methods, ext_methods),
                attr_addresses: Env::pair(sup.attr_addresses, ext_addresses),
                fragment: Env::pair(sup.fragment, ext_fragment),
            })
        }
        other => Err(format!("cannot instantiate a non-class value {other:?}")),
    }
}

/// Sends a one-argument message: allocates a cell for the argument, extends
/// the method context with it and evaluates the body with the method's own
/// receiver as `this`. An absent method (or a zero-argument one) yields an
/// error value carrying the message name.
pub fn send_message(
    message: &str,
    object: &Methods,
    argument: Value,
    heap: Heap,
    fuel: &mut Fuel,
) -> Result<(Value, Heap), FuelExhausted> {
    match object.find_str(message) {
        Some(Method::Unary { param, context, receiver, body }) => {
            let (address, heap) = heap.alloc(argument);
            let env = Env::pair(context.clone(), Env::bind(param.clone(), address));
            let receiver = receiver.clone();
            let body = body.clone();
            java_eval(&body, &env, heap, &receiver, fuel)
        }
        _ => Ok((Value::Error(message.to_string()), heap)),
    }
}

/// Zero-argument counterpart of [`send_message`]; no argument cell is
/// allocated.
pub fn send_message0(
    message: &str,
    object: &Methods,
    heap: Heap,
    fuel: &mut Fuel,
) -> Result<(Value, Heap), FuelExhausted> {
    match object.find_str(message) {
        Some(Method::Nullary { context, receiver, body }) => {
            let context = context.clone();
            let receiver = receiver.clone();
            let body = body.clone();
            java_eval(&body, &context, heap, &receiver, fuel)
        }
        _ => Ok((Value::Error(message.to_string()), heap)),
    }
}

/// Dispatches a one-argument message to an arbitrary value, erroring unless it
/// is an object. Existing error values pass through unchanged.
pub fn send_value(
    target: &Value,
    message: &str,
    argument: Value,
    heap: Heap,
    fuel: &mut Fuel,
) -> Result<(Value, Heap), FuelExhausted> {
    match target {
        Value::Object(obj) => send_message(message, &obj.methods(), argument, heap, fuel),
        Value::Error(_) => Ok((target.clone(), heap)),
        _ => Ok((
            Value::Error(format!("message '{message}' sent to a non-object")),
            heap,
        )),
    }
}

/// Zero-argument counterpart of [`send_value`].
pub fn send_value0(
    target: &Value,
    message: &str,
    heap: Heap,
    fuel: &mut Fuel,
) -> Result<(Value, Heap), FuelExhausted> {
    match target {
        Value::Object(obj) => send_message0(message, &obj.methods(), heap, fuel),
        Value::Error(_) => Ok((target.clone(), heap)),
        _ => Ok((
            Value::Error(format!("message '{message}' sent to a non-object")),
            heap,
        )),
    }
}

/// Evaluates a term, threading the heap. `env` maps free variables to
/// addresses, `this` is the object whose method is currently executing. One
/// fuel unit is consumed per call. Type errors and unbound variables become
/// error values; the heap keeps every allocation made before the error.
pub fn java_eval(
    term: &Term,
    env: &Context,
    heap: Heap,
    this: &Value,
    fuel: &mut Fuel,
) -> Result<(Value, Heap), FuelExhausted> {
    fuel.tick()?;
    match term {
        Term::Seq(first, second) => {
            // The first value is discarded, error or not; only its heap
            // effects survive.
            let (_, heap) = java_eval(first, env, heap, this, fuel)?;
            java_eval(second, env, heap, this, fuel)
        }
        Term::Int(n) => Ok((Value::Int(*n), heap)),
        Term::Var(name) => {
            let address = env.lookup(name, 0);
            if address == 0 {
                return Ok((Value::Error(format!("unbound variable '{name}'")), heap));
            }
            match heap.get(address) {
                Some(value) => Ok((value.clone(), heap)),
                None => Ok((Value::Error("heap".to_string()), heap)),
            }
        }
        Term::NullClassDef => Ok((Value::NullClass, heap)),
        Term::ClassDef { super_class, attributes, methods } => {
            let (super_value, heap) = java_eval(super_class, env, heap, this, fuel)?;
            match super_value {
                Value::NullClass | Value::Class(_) => {
                    let class = ClassValue {
                        context: env.clone(),
                        super_class: super_value,
                        attributes: attributes.clone(),
                        methods: methods.clone(),
                    };
                    Ok((Value::Class(Rc::new(class)), heap))
                }
                Value::Error(_) => Ok((super_value, heap)),
                other => Ok((
                    Value::Error(format!("super-class is not a class: {other:?}")),
                    heap,
                )),
            }
        }
        Term::New(class_expr) => {
            let (class_value, heap) = java_eval(class_expr, env, heap, this, fuel)?;
            Ok(new_instance(&class_value, heap))
        }
        Term::Send { target, message, arg } => {
            let (target_value, heap) = java_eval(target, env, heap, this, fuel)?;
            let (arg_value, heap) = java_eval(arg, env, heap, this, fuel)?;
            send_value(&target_value, message, arg_value, heap, fuel)
        }
        Term::Send0 { target, message } => {
            let (target_value, heap) = java_eval(target, env, heap, this, fuel)?;
            send_value0(&target_value, message, heap, fuel)
        }
        Term::This => Ok((this.clone(), heap)),
        Term::If { cond, then_branch, else_branch } => {
            let (cond_value, heap) = java_eval(cond, env, heap, this, fuel)?;
            match cond_value {
                Value::Bool(true) => java_eval(then_branch, env, heap, this, fuel),
                Value::Bool(false) => java_eval(else_branch, env, heap, this, fuel),
                Value::Error(_) => Ok((cond_value, heap)),
                other => Ok((
                    Value::Error(format!("condition is not a boolean: {other:?}")),
                    heap,
                )),
            }
        }
        Term::Set(name, expr) => {
            let (value, heap) = java_eval(expr, env, heap, this, fuel)?;
            let address = env.lookup(name, 0);
            if address == 0 {
                return Ok((
                    Value::Error(format!("assignment to unbound variable '{name}'")),
                    heap,
                ));
            }
            let heap = heap.set(address, value.clone());
            Ok((value, heap))
        }
        Term::Eql(left, right) => {
            let (left_value, heap) = java_eval(left, env, heap, this, fuel)?;
            let (right_value, heap) = java_eval(right, env, heap, this, fuel)?;
            if left_value.is_error() {
                return Ok((left_value, heap));
            }
            if right_value.is_error() {
                return Ok((right_value, heap));
            }
            Ok((Value::Bool(left_value.eql(&right_value)), heap))
        }
    }
}

/// Instantiates an evaluated class value, tying the receiver fixed point: the
/// object cell is created first, the method table is built referring to it,
/// then installed. The attribute fragment lands right after the current heap.
fn new_instance(class_value: &Value, heap: Heap) -> (Value, Heap) {
    if let Value::Error(_) = class_value {
        return (class_value.clone(), heap);
    }
    let cell = ObjectCell::fresh();
    let this = Value::Object(cell.clone());
    match instantiate(class_value, heap.next_free(), &this) {
        Ok(instance) => {
            cell.install(instance.methods);
            let heap = heap.append_fragment(instance.fragment);
            (this, heap)
        }
        Err(message) => (Value::Error(message), heap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(term: &Term) -> (Value, Heap) {
        run_in(term, &Env::Empty, Heap::new())
    }

    fn run_in(term: &Term, env: &Context, heap: Heap) -> (Value, Heap) {
        let mut fuel = Fuel::new(100_000);
        java_eval(term, env, heap, &Value::Null, &mut fuel).unwrap()
    }

    #[test]
    fn integers_evaluate_to_themselves() {
        let (value, _) = run(&Term::int(7));
        assert!(value.eql(&Value::Int(7)));
    }

    #[test]
    fn instantiating_the_null_class_yields_the_empty_triple() {
        let instance = instantiate(&Value::NullClass, 5, &Value::Null).unwrap();
        assert_eq!(instance.methods, Env::Empty);
        assert_eq!(instance.attr_addresses, Env::Empty);
        assert_eq!(instance.fragment, Env::Empty);
    }

    #[test]
    fn attributes_allocate_contiguously_from_the_base_and_start_null() {
        let term = Term::class_def(Term::NullClassDef, &["a", "b"], Env::Empty);
        let (class_value, _) = run(&term);
        let instance = instantiate(&class_value, 1, &Value::Null).unwrap();
        assert_eq!(instance.attr_addresses.find_str("a"), Some(&1));
        assert_eq!(instance.attr_addresses.find_str("b"), Some(&2));
        assert_eq!(instance.fragment.binding_count(), 2);
        assert!(instance.fragment.find(&1).unwrap().eql(&Value::Null));
        assert!(instance.fragment.find(&2).unwrap().eql(&Value::Null));
    }

    #[test]
    fn instantiating_a_non_class_is_an_error() {
        let (value, _) = run(&Term::new_obj(Term::int(3)));
        assert!(value.is_error());
    }

    #[test]
    fn missing_method_errors_with_the_message_name() {
        let class = Term::class_def(Term::NullClassDef, &[], Env::Empty);
        let object = Term::new_obj(class);
        let (value, _) = run(&Term::send(object, "missing", Term::int(1)));
        match value {
            Value::Error(message) => assert_eq!(message, "missing"),
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn identity_method_returns_its_argument_and_grows_the_heap_by_one_cell() {
        let class = Term::class_def(
            Term::NullClassDef,
            &[],
            Env::bind("id".to_string(), MethodDef::unary("v", Term::var("v"))),
        );
        let term = Term::send(Term::new_obj(class), "id", Term::int(9));
        let heap = Heap::new();
        let before = heap.next_free();
        let (value, heap) = run_in(&term, &Env::Empty, heap);
        assert!(value.eql(&Value::Int(9)));
        assert_eq!(heap.next_free(), before + 1);
    }

    #[test]
    fn nullary_method_runs_without_allocating() {
        let class = Term::class_def(
            Term::NullClassDef,
            &[],
            Env::bind("five".to_string(), MethodDef::nullary(Term::int(5))),
        );
        let (object, heap) = run(&Term::new_obj(class));
        let before = heap.next_free();
        let mut fuel = Fuel::new(1_000);
        let (value, heap) = send_value0(&object, "five", heap, &mut fuel).unwrap();
        assert!(value.eql(&Value::Int(5)));
        assert_eq!(heap.next_free(), before);
    }

    #[test]
    fn zero_arg_send_to_unary_method_is_an_arity_error() {
        let class = Term::class_def(
            Term::NullClassDef,
            &[],
            Env::bind("id".to_string(), MethodDef::unary("v", Term::var("v"))),
        );
        let (object, heap) = run(&Term::new_obj(class));
        let mut fuel = Fuel::new(1_000);
        let (value, _) = send_value0(&object, "id", heap, &mut fuel).unwrap();
        match value {
            Value::Error(message) => assert_eq!(message, "id"),
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn set_then_read_yields_the_written_value() {
        let heap = Heap::new();
        let (addr, heap) = heap.alloc(Value::Null);
        let env = Env::bind("a".to_string(), addr);
        let term = Term::seq(Term::set("a", Term::int(1)), Term::var("a"));
        let (value, heap) = run_in(&term, &env, heap);
        assert!(value.eql(&Value::Int(1)));
        assert!(heap.get(addr).unwrap().eql(&Value::Int(1)));
    }

    #[test]
    fn every_method_of_a_new_object_carries_that_object_as_receiver() {
        let methods = Env::pair(
            Env::bind("f".to_string(), MethodDef::nullary(Term::This)),
            Env::bind("g".to_string(), MethodDef::unary("v", Term::This)),
        );
        let class = Term::class_def(Term::NullClassDef, &[], methods);
        let (object, heap) = run(&Term::new_obj(class));
        let obj = object.object().expect("an object");
        for name in ["f", "g"] {
            let table = obj.methods();
            let method = table.find_str(name).unwrap();
            match method.receiver() {
                Value::Object(receiver) => assert!(Rc::ptr_eq(receiver, obj)),
                other => panic!("receiver is {other:?}"),
            }
        }
        // This inside a method body evaluates to the very same object.
        let mut fuel = Fuel::new(1_000);
        let (this_value, _) = send_value0(&object, "f", heap, &mut fuel).unwrap();
        assert!(this_value.eql(&object));
    }

    #[test]
    fn subclass_methods_shadow_super_methods() {
        let base = Term::class_def(
            Term::NullClassDef,
            &[],
            Env::bind("answer".to_string(), MethodDef::nullary(Term::int(1))),
        );
        let derived = Term::ClassDef {
            super_class: Rc::new(base),
            attributes: vec![],
            methods: Env::bind("answer".to_string(), MethodDef::nullary(Term::int(2))),
        };
        let (object, heap) = run(&Term::new_obj(derived));
        let mut fuel = Fuel::new(1_000);
        let (value, _) = send_value0(&object, "answer", heap, &mut fuel).unwrap();
        assert!(value.eql(&Value::Int(2)));
    }

    #[test]
    fn class_definitions_capture_the_current_environment() {
        let heap = Heap::new();
        let (addr, heap) = heap.alloc(Value::Int(41));
        let env = Env::bind("x".to_string(), addr);
        let class = Term::class_def(
            Term::NullClassDef,
            &[],
            Env::bind("peek".to_string(), MethodDef::nullary(Term::var("x"))),
        );
        let (class_value, heap) = run_in(&class, &env, heap);
        match &class_value {
            Value::Class(c) => assert_eq!(c.context.find_str("x"), Some(&addr)),
            other => panic!("expected class, got {other:?}"),
        }
        // An instance reads the captured variable through the heap.
        let (object, heap) = new_instance(&class_value, heap);
        let mut fuel = Fuel::new(1_000);
        let (value, _) = send_value0(&object, "peek", heap, &mut fuel).unwrap();
        assert!(value.eql(&Value::Int(41)));
    }

    #[test]
    fn attribute_cells_live_in_method_contexts_and_are_settable() {
        let methods = Env::pair(
            Env::bind(
                "put".to_string(),
                MethodDef::unary("v", Term::set("slot", Term::var("v"))),
            ),
            Env::bind("get".to_string(), MethodDef::nullary(Term::var("slot"))),
        );
        let class = Term::class_def(Term::NullClassDef, &["slot"], methods);
        let (object, heap) = run(&Term::new_obj(class));
        let mut fuel = Fuel::new(1_000);
        let (_, heap) = send_value(&object, "put", Value::Int(8), heap, &mut fuel).unwrap();
        let (value, _) = send_value0(&object, "get", heap, &mut fuel).unwrap();
        assert!(value.eql(&Value::Int(8)));
    }

    #[test]
    fn errors_leave_prior_heap_cells_intact() {
        let heap = Heap::new();
        let (addr, heap) = heap.alloc(Value::Int(5));
        let env = Env::bind("x".to_string(), addr);
        let (value, heap) = run_in(&Term::send(Term::int(1), "m", Term::var("x")), &env, heap);
        assert!(value.is_error());
        assert!(heap.get(addr).unwrap().eql(&Value::Int(5)));
    }

    #[test]
    fn if_requires_a_boolean() {
        let term = Term::if_(Term::int(1), Term::int(2), Term::int(3));
        let (value, _) = run(&term);
        assert!(value.is_error());
    }

    #[test]
    fn eql_compares_objects_by_identity() {
        let class = Term::class_def(Term::NullClassDef, &[], Env::Empty);
        let (a, heap) = run(&Term::new_obj(class.clone()));
        let (b, _) = run_in(&Term::new_obj(class), &Env::Empty, heap);
        assert!(a.eql(&a));
        assert!(!a.eql(&b));
        assert!(Value::Null.eql(&Value::Null));
        assert!(!Value::Int(0).eql(&Value::Null));
    }
}
