use alloc::string::String;
use alloc::vec::Vec;

/// Fixed-length descriptor tagged with the name of the method that produced it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    pub descriptor: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(descriptor: impl Into<String>, values: Vec<f64>) -> Self {
        FeatureVector {
            descriptor: descriptor.into(),
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
