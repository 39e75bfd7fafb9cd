//! Property inputs and their serialized form, used for counterexample dumps and replays.

use fresco_core::ops::{ABOperator, OperatorFile};
use fresco_core::rational::{fmt_q, parse_q};
use fresco_core::xi::ElementFile;
use fresco_core::{Result, XiElement, Q};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Element(XiElement),
    Division { op: ABOperator, lambda: Q },
    Action { left: ABOperator, right: ABOperator, element: XiElement },
    Power(usize),
    Word(Vec<Q>),
    Module(Vec<XiElement>),
    Fresco(XiElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputFile {
    Element { element: ElementFile },
    Division { operator: OperatorFile, lambda: String },
    Action { left: OperatorFile, right: OperatorFile, element: ElementFile },
    Power { q: usize },
    Word { lambdas: Vec<String> },
    Module { generators: Vec<ElementFile> },
    Fresco { generator: ElementFile },
}

impl Input {
    pub fn to_file(&self) -> InputFile {
        match self {
            Input::Element(x) => InputFile::Element { element: x.to_file() },
            Input::Division { op, lambda } => InputFile::Division { operator: op.to_file(), lambda: fmt_q(lambda) },
            Input::Action { left, right, element } => {
                InputFile::Action { left: left.to_file(), right: right.to_file(), element: element.to_file() }
            }
            Input::Power(n) => InputFile::Power { q: *n },
            Input::Word(ls) => InputFile::Word { lambdas: ls.iter().map(fmt_q).collect() },
            Input::Module(gs) => InputFile::Module { generators: gs.iter().map(XiElement::to_file).collect() },
            Input::Fresco(x) => InputFile::Fresco { generator: x.to_file() },
        }
    }

    pub fn from_file(f: &InputFile) -> Result<Self> {
        Ok(match f {
            InputFile::Element { element } => Input::Element(XiElement::from_file(element)?),
            InputFile::Division { operator, lambda } => {
                Input::Division { op: ABOperator::from_file(operator)?, lambda: parse_q(lambda)? }
            }
            InputFile::Action { left, right, element } => Input::Action {
                left: ABOperator::from_file(left)?,
                right: ABOperator::from_file(right)?,
                element: XiElement::from_file(element)?,
            },
            InputFile::Power { q } => Input::Power(*q),
            InputFile::Word { lambdas } => Input::Word(lambdas.iter().map(|s| parse_q(s)).collect::<Result<_>>()?),
            InputFile::Module { generators } => {
                Input::Module(generators.iter().map(XiElement::from_file).collect::<Result<_>>()?)
            }
            InputFile::Fresco { generator } => Input::Fresco(XiElement::from_file(generator)?),
        })
    }
}
