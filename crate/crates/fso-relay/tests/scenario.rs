use fso_relay::scenario::{parse_protocols, Scenario, DEFAULT_L};
use fso_relay::Error;
use fso_relay_core::hop::Pointing;
use fso_relay_core::relay::{Gain, Protocol};
use fso_relay_core::Modulation;

fn base() -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "hop": { "gamma_gamma": { "alpha": 4, "beta": 2 }, "xi_sq": 1 },
        "protocols": ["df", "csi0"],
        "sweep": { "start_db": 0, "stop_db": 30, "step_db": 10 }
    })
}

fn parse(v: &serde_json::Value) -> Result<Scenario, Error> {
    Scenario::from_json(&v.to_string())
}

fn is_config(r: Result<Scenario, Error>) -> bool {
    matches!(r, Err(Error::Config(_)))
}

#[test]
fn defaults() {
    let s = parse(&base()).unwrap();
    assert_eq!(s.grid_db, vec![0.0, 10.0, 20.0, 30.0]);
    assert_eq!(s.modulation, Modulation::BPSK);
    assert_eq!(s.gamma_th_db, 0.0);
    assert_eq!(s.gain, Gain::Auto);
    assert_eq!(s.hops[0].mg.len(), DEFAULT_L);
    assert_eq!(
        s.hops[0].pointing,
        Pointing::from_geometry(1.0, 0.1, 1.0).unwrap()
    );
    assert!(s.mc.is_none());
    assert_eq!(
        s.protocols,
        vec![
            Protocol::Df,
            Protocol::CsiAf(fso_relay_core::CsiMode::Approximate)
        ]
    );
}

#[test]
fn asymmetric_hops_and_offsets() {
    let mut v = base();
    v.as_object_mut().unwrap().remove("hop");
    v["hops"] = serde_json::json!([
        { "mg": [{ "a": 1, "b": 2, "c": 1 }], "xi_sq": 1, "A0": 1 },
        { "gamma_gamma": { "alpha": 5, "beta": 3, "L": 6 }, "xi_sq": 2, "gamma_bar_offset_db": -3 }
    ]);
    let s = parse(&v).unwrap();
    let (h1, h2) = s.hops_at(10.0).unwrap();
    assert_eq!(h1.gamma_bar(), 10.0);
    assert!((h2.gamma_bar() - 10f64.powf(0.7)).abs() < 1e-12);
    assert_eq!(h2.mg().len(), 6);
}

#[test]
fn validation_errors() {
    let mut v = base();
    v["protocols"] = serde_json::json!([]);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["protocols"] = serde_json::json!(["af"]);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["sweep"]["step_db"] = serde_json::json!(0);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["sweep"]["stop_db"] = serde_json::json!(-1);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["schema"] = serde_json::json!(2);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["hops"] = serde_json::json!([]);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["hop"]["gamma_gamma"]["alpha"] = serde_json::json!(0);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["surprise"] = serde_json::json!(1);
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["mc"] = serde_json::json!({ "samples": 10 });
    assert!(is_config(parse(&v)));
    let mut v = base();
    v["hop"]["mg"] = serde_json::json!([{ "a": 1, "b": 2, "c": 1 }]);
    assert!(is_config(parse(&v)));
    assert!(is_config(Scenario::from_json("{")));
}

#[test]
fn mc_source_selection() {
    let mut v = base();
    v["mc"] = serde_json::json!({ "samples": 10000, "seed": 3 });
    let s = parse(&v).unwrap();
    assert!(matches!(
        s.mc.unwrap().fading,
        fso_relay::mcsim::Fading::GammaGamma(_)
    ));
    v["mc"]["source"] = serde_json::json!("mg");
    assert_eq!(
        parse(&v).unwrap().mc.unwrap().fading,
        fso_relay::mcsim::Fading::Mixture
    );
    v["hop"] = serde_json::json!({ "mg": [{ "a": 1, "b": 2, "c": 1 }], "xi_sq": 1 });
    v["mc"]["source"] = serde_json::json!("gamma_gamma");
    assert!(is_config(parse(&v)));
}

#[test]
fn protocol_lists() {
    assert_eq!(parse_protocols(&["fixed", "csi1"]).unwrap().len(), 2);
    assert!(parse_protocols(&["df", "df"]).is_err());
    assert!(parse_protocols::<&str>(&[]).is_err());
}
