//! JSON s-expression form of trees: `["mean", ["add", ["var"], ["const", 3.25]]]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::expr::{ExprNode, ReduceOp, BINARY_OPS, UNARY_OPS};
use crate::error::{Error, Result};

pub fn to_value(node: &ExprNode) -> Value {
    match node {
        ExprNode::Variable => json!(["var"]),
        ExprNode::Constant(c) => json!(["const", c]),
        ExprNode::Unary(op, c) => json!([op.name(), to_value(c)]),
        ExprNode::Binary(op, l, r) => json!([op.name(), to_value(l), to_value(r)]),
        ExprNode::Reduce(op, c) => json!([op.name(), to_value(c)]),
    }
}

pub fn from_value(value: &Value) -> Result<ExprNode> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::TreeParse(format!("expected array, found {value}")))?;
    let (head, args) = items
        .split_first()
        .ok_or_else(|| Error::TreeParse("empty node".into()))?;
    let name = head
        .as_str()
        .ok_or_else(|| Error::TreeParse(format!("operator must be a string, found {head}")))?;
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::TreeParse(format!(
                "{name:?} takes {n} arguments, found {}",
                args.len()
            )))
        }
    };

    if name == "var" {
        arity(0)?;
        return Ok(ExprNode::Variable);
    }
    if name == "const" {
        arity(1)?;
        let c = args[0]
            .as_f64()
            .ok_or_else(|| Error::TreeParse(format!("constant must be a number, found {}", args[0])))?;
        return Ok(ExprNode::Constant(c));
    }
    if name == ReduceOp::Mean.name() {
        arity(1)?;
        return Ok(ExprNode::Reduce(ReduceOp::Mean, Box::new(from_value(&args[0])?)));
    }
    if let Some(op) = UNARY_OPS.iter().find(|op| op.name() == name) {
        arity(1)?;
        return Ok(ExprNode::unary(*op, from_value(&args[0])?));
    }
    if let Some(op) = BINARY_OPS.iter().find(|op| op.name() == name) {
        arity(2)?;
        return Ok(ExprNode::binary(*op, from_value(&args[0])?, from_value(&args[1])?));
    }
    Err(Error::TreeParse(format!("unknown operator {name:?}")))
}

impl ExprNode {
    pub fn to_json(&self) -> String {
        to_value(self).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::TreeParse(e.to_string()))?;
        from_value(&value)
    }
}

impl Serialize for ExprNode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        to_value(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExprNode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        from_value(&value).map_err(D::Error::custom)
    }
}
