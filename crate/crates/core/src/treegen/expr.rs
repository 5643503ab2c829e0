//! Expression trees over the decision vector.
//!
//! Intermediate values are vectors (elementwise ops over `x`) or scalars
//! (constants broadcast on demand). The root reduces a vector to a scalar.
//! Every operator is protected, so evaluation is total over finite inputs.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Negate,
    Absolute,
    Square,
    /// `sqrt(|a|)`
    ProtectedSqrt,
    /// `ln(1 + |a|)`
    ProtectedLog,
    /// `exp(clamp(a, -50, 50))`
    ClampedExp,
    Sine,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Subtract,
    Multiply,
    /// `a / b`, or `1` when `|b| <= 1e-9`
    ProtectedDivide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReduceOp {
    Mean,
}

pub const UNARY_OPS: [UnaryOp; 8] = [
    UnaryOp::Negate,
    UnaryOp::Absolute,
    UnaryOp::Square,
    UnaryOp::ProtectedSqrt,
    UnaryOp::ProtectedLog,
    UnaryOp::ClampedExp,
    UnaryOp::Sine,
    UnaryOp::Cosine,
];

pub const BINARY_OPS: [BinaryOp; 4] = [
    BinaryOp::Add,
    BinaryOp::Subtract,
    BinaryOp::Multiply,
    BinaryOp::ProtectedDivide,
];

const DIVIDE_GUARD: f64 = 1e-9;
const EXP_CLAMP: f64 = 50.0;

impl UnaryOp {
    pub fn apply(self, a: f64) -> f64 {
        match self {
            UnaryOp::Negate => -a,
            UnaryOp::Absolute => a.abs(),
            UnaryOp::Square => a * a,
            UnaryOp::ProtectedSqrt => a.abs().sqrt(),
            UnaryOp::ProtectedLog => a.abs().ln_1p(),
            UnaryOp::ClampedExp => a.clamp(-EXP_CLAMP, EXP_CLAMP).exp(),
            UnaryOp::Sine => a.sin(),
            UnaryOp::Cosine => a.cos(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Negate => "neg",
            UnaryOp::Absolute => "abs",
            UnaryOp::Square => "square",
            UnaryOp::ProtectedSqrt => "sqrt",
            UnaryOp::ProtectedLog => "log",
            UnaryOp::ClampedExp => "exp",
            UnaryOp::Sine => "sin",
            UnaryOp::Cosine => "cos",
        }
    }
}

impl BinaryOp {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Subtract => a - b,
            BinaryOp::Multiply => a * b,
            BinaryOp::ProtectedDivide => {
                if b.abs() > DIVIDE_GUARD {
                    a / b
                } else {
                    1.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Add => "add",
            BinaryOp::Subtract => "sub",
            BinaryOp::Multiply => "mul",
            BinaryOp::ProtectedDivide => "div",
        }
    }
}

impl ReduceOp {
    pub fn name(self) -> &'static str {
        match self {
            ReduceOp::Mean => "mean",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    /// The whole decision vector.
    Variable,
    Constant(f64),
    Unary(UnaryOp, Box<ExprNode>),
    Binary(BinaryOp, Box<ExprNode>, Box<ExprNode>),
    Reduce(ReduceOp, Box<ExprNode>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDefect {
    RootNotReduce,
    NestedReduce,
    TooDeep { depth: usize, max_depth: usize },
    NoVariable,
}

impl fmt::Display for TreeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeDefect::RootNotReduce => f.write_str("root is not a reduce node"),
            TreeDefect::NestedReduce => f.write_str("reduce node below the root"),
            TreeDefect::TooDeep { depth, max_depth } => {
                write!(f, "depth {depth} exceeds max depth {max_depth}")
            }
            TreeDefect::NoVariable => f.write_str("no variable leaf"),
        }
    }
}

enum Value {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Value {
    fn map(self, op: impl Fn(f64) -> f64) -> Value {
        match self {
            Value::Scalar(a) => Value::Scalar(op(a)),
            Value::Vector(mut v) => {
                v.iter_mut().for_each(|a| *a = op(*a));
                Value::Vector(v)
            }
        }
    }

    fn zip(self, other: Value, op: impl Fn(f64, f64) -> f64) -> Value {
        match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(op(a, b)),
            (Value::Vector(mut v), Value::Scalar(b)) => {
                v.iter_mut().for_each(|a| *a = op(*a, b));
                Value::Vector(v)
            }
            (Value::Scalar(a), Value::Vector(mut v)) => {
                v.iter_mut().for_each(|b| *b = op(a, *b));
                Value::Vector(v)
            }
            (Value::Vector(mut v), Value::Vector(w)) => {
                v.iter_mut().zip(w).for_each(|(a, b)| *a = op(*a, b));
                Value::Vector(v)
            }
        }
    }

    fn mean(self) -> f64 {
        match self {
            Value::Scalar(a) => a,
            Value::Vector(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

impl ExprNode {
    pub fn constant(c: f64) -> Self {
        ExprNode::Constant(c)
    }

    pub fn unary(op: UnaryOp, child: ExprNode) -> Self {
        ExprNode::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: ExprNode, right: ExprNode) -> Self {
        ExprNode::Binary(op, Box::new(left), Box::new(right))
    }

    pub fn mean(child: ExprNode) -> Self {
        ExprNode::Reduce(ReduceOp::Mean, Box::new(child))
    }

    /// Evaluates the tree at `x`; the result is scalar after the root reduction.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.eval_value(x).mean()
    }

    fn eval_value(&self, x: &[f64]) -> Value {
        match self {
            ExprNode::Variable => Value::Vector(x.to_vec()),
            ExprNode::Constant(c) => Value::Scalar(*c),
            ExprNode::Unary(op, child) => child.eval_value(x).map(|a| op.apply(a)),
            ExprNode::Binary(op, l, r) => l.eval_value(x).zip(r.eval_value(x), |a, b| op.apply(a, b)),
            ExprNode::Reduce(ReduceOp::Mean, child) => Value::Scalar(child.eval_value(x).mean()),
        }
    }

    /// Edges on the longest root-to-leaf path (a leaf has depth 0).
    pub fn depth(&self) -> usize {
        match self {
            ExprNode::Variable | ExprNode::Constant(_) => 0,
            ExprNode::Unary(_, c) | ExprNode::Reduce(_, c) => 1 + c.depth(),
            ExprNode::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            ExprNode::Variable | ExprNode::Constant(_) => 1,
            ExprNode::Unary(_, c) | ExprNode::Reduce(_, c) => 1 + c.node_count(),
            ExprNode::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    pub fn has_variable(&self) -> bool {
        match self {
            ExprNode::Variable => true,
            ExprNode::Constant(_) => false,
            ExprNode::Unary(_, c) | ExprNode::Reduce(_, c) => c.has_variable(),
            ExprNode::Binary(_, l, r) => l.has_variable() || r.has_variable(),
        }
    }

    fn reduce_count(&self) -> usize {
        match self {
            ExprNode::Variable | ExprNode::Constant(_) => 0,
            ExprNode::Unary(_, c) => c.reduce_count(),
            ExprNode::Reduce(_, c) => 1 + c.reduce_count(),
            ExprNode::Binary(_, l, r) => l.reduce_count() + r.reduce_count(),
        }
    }

    /// Checks the structural invariants of a complete objective tree.
    pub fn validate(&self, max_depth: usize) -> Result<(), TreeDefect> {
        if !matches!(self, ExprNode::Reduce(..)) {
            return Err(TreeDefect::RootNotReduce);
        }
        if self.reduce_count() != 1 {
            return Err(TreeDefect::NestedReduce);
        }
        let depth = self.depth();
        if depth > max_depth {
            return Err(TreeDefect::TooDeep { depth, max_depth });
        }
        if !self.has_variable() {
            return Err(TreeDefect::NoVariable);
        }
        Ok(())
    }
}
