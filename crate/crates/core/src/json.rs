//! Serde helpers shared by the wire formats.

/// `f64` fields that may be infinite, written with the `"inf"`/`"-inf"`
/// sentinels instead of JSON `null`.
pub mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::gauss::ExtReal;

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        ExtReal::new(*value).map_err(serde::ser::Error::custom)?.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        Ok(ExtReal::deserialize(deserializer)?.value())
    }
}

/// Serializer for optional `f64` fields that may be infinite.
pub mod opt_ext_f64 {
    use serde::{Serialize, Serializer};

    use crate::gauss::ExtReal;

    pub fn serialize<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
        value
            .map(ExtReal::new)
            .transpose()
            .map_err(serde::ser::Error::custom)?
            .serialize(serializer)
    }
}
