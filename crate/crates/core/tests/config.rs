use tecell::config::CellConfig;
use tecell::Error;

#[test]
fn preset_round_trips() {
    let c = CellConfig::nacl_default();
    let back = CellConfig::from_json_str(&c.to_json().unwrap()).unwrap();
    assert_eq!(back, c);
    assert!(back.is_nacl_preset());
}

#[test]
fn unknown_field_is_rejected_with_path() {
    let text = CellConfig::nacl_default().to_json().unwrap().replacen("\"dt\"", "\"dtt\"", 1);
    match CellConfig::from_json_str(&text) {
        Err(Error::Config { path, .. }) => assert!(path.starts_with("solver"), "{path}"),
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn preset_builds_a_valid_model_and_mesh() {
    let c = CellConfig::nacl_default();
    let mesh = c.build_mesh().unwrap();
    let model = c.build_model().unwrap();
    assert_eq!(mesh.node_count(), 41);
    assert_eq!(model.species.len(), 2);
}
