//! The checked-in data files are exactly what the generators emit.

use std::path::PathBuf;

use mpc_core::generators::{generate, shipped};
use mpc_core::model::{parse_space, serialize_space, validate};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[test]
fn data_files_match_generators() {
    for (name, params) in shipped() {
        let path = data_dir().join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let space = generate(&params).unwrap();
        assert_eq!(text, serialize_space(&space), "{name} is stale; regenerate with `mpc gen`");
        let parsed = parse_space(&text).unwrap();
        assert_eq!(parsed, space);
        assert!(validate(&parsed).is_ok());
    }
}
