use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A named row-major `f32` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl Tensor {
    pub fn new(name: impl Into<String>, shape: Vec<usize>, data: Vec<f32>) -> Self {
        Self { name: name.into(), shape, data }
    }
}

/// Ordered list of named tensors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightBundle {
    pub tensors: Vec<Tensor>,
}

impl WeightBundle {
    pub fn new(tensors: Vec<Tensor>) -> Self {
        Self { tensors }
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.iter().find(|t| t.name == name)
    }

    /// Checks unique names, positive dims and `product(shape) == data.len()`.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for t in &self.tensors {
            if !seen.insert(t.name.as_str()) {
                return Err(Error::Invalid(alloc::format!("duplicate tensor `{}`", t.name)));
            }
            if t.shape.contains(&0) {
                return Err(Error::Invalid(alloc::format!("tensor `{}` has a zero dimension", t.name)));
            }
            let n: usize = t.shape.iter().product();
            if n != t.data.len() {
                return Err(Error::Invalid(alloc::format!(
                    "tensor `{}` has shape {:?} but {} values",
                    t.name,
                    t.shape,
                    t.data.len()
                )));
            }
        }
        Ok(())
    }
}
