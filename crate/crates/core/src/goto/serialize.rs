//! The GBF1 model file format: the magic bytes `GBF1` followed by the
//! bincode encoding of the model (symbol table, functions, entry point).

use std::path::Path;

use super::{GotoError, GotoModel};

pub const MAGIC: &[u8; 4] = b"GBF1";

pub fn serialize(model: &GotoModel) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    out.extend(bincode::serialize(model).expect("models are always serialisable"));
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<GotoModel, GotoError> {
    if bytes.len() < 4 || &bytes[..3] != b"GBF" {
        return Err(GotoError("not a GOTO binary".to_string()));
    }
    if bytes[3] != MAGIC[3] {
        return Err(GotoError(format!(
            "unsupported GOTO binary version `{}'",
            String::from_utf8_lossy(&bytes[3..4])
        )));
    }
    bincode::deserialize(&bytes[4..]).map_err(|e| GotoError(format!("corrupt GOTO binary: {e}")))
}

pub fn write_file(path: &Path, model: &GotoModel) -> Result<(), GotoError> {
    std::fs::write(path, serialize(model)).map_err(|e| GotoError(format!("{}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> Result<GotoModel, GotoError> {
    let bytes = std::fs::read(path).map_err(|e| GotoError(format!("{}: {e}", path.display())))?;
    deserialize(&bytes)
}

pub fn is_model_file(bytes: &[u8]) -> bool {
    bytes.starts_with(b"GBF")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::types::PlatformConfig;
    use crate::frontend::{compile_source, PreprocessOptions};
    use crate::goto::convert::convert_program;

    #[test]
    fn round_trip() {
        let src = "int abs(int x) {\n  int y = x;\n  if(x < 0) {\n    y = -x;\n  }\n  return y;\n}\n";
        let p = compile_source("abs.c", src, &PreprocessOptions::default(), &PlatformConfig::default()).unwrap();
        let m = convert_program(&p);
        let bytes = serialize(&m);
        assert_eq!(&bytes[..4], b"GBF1");
        assert_eq!(deserialize(&bytes).unwrap(), m);
    }

    #[test]
    fn version_mismatch() {
        let mut bytes = serialize(&GotoModel::default());
        bytes[3] = b'9';
        assert!(deserialize(&bytes).unwrap_err().0.contains("version"));
        assert!(deserialize(b"ELF").is_err());
    }
}
