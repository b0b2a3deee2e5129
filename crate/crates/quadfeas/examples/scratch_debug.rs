// Temporary diagnostic: covering-net construction at acceptance scale.
use quadfeas::landscape::{NetConfig, SphereCover};
use quadfeas::measurement::MeasurementEnsemble;
use std::time::Instant;

fn main() {
    let cfg = NetConfig::default();
    for delta in [0.25f64, 0.1] {
        let t = Instant::now();
        match SphereCover::build(2, delta, &cfg, 55) {
            Ok(cover) => {
                println!(
                    "delta={delta}: net={} probes={} built in {:?}",
                    cover.net_len(),
                    cover.probe_len(),
                    t.elapsed()
                );
                let ens = MeasurementEnsemble::sample_hermitian_gaussian(2, 20, 1.0, 56).unwrap();
                let tc = Instant::now();
                let mut all = true;
                for a in ens.matrices() {
                    let case = cover.check(a).unwrap();
                    all &= case.holds;
                }
                println!("  20 checks: all_hold={all} in {:?}", tc.elapsed());
            }
            Err(e) => println!("delta={delta}: ERROR {e} after {:?}", t.elapsed()),
        }
    }
    // n=3 behavior: feasible at 0.25? refusal at 0.1?
    for delta in [0.25f64, 0.1] {
        let t = Instant::now();
        match SphereCover::build(3, delta, &cfg, 57) {
            Ok(cover) => println!("n=3 delta={delta}: net={} in {:?}", cover.net_len(), t.elapsed()),
            Err(e) => println!("n=3 delta={delta}: ERROR {e} after {:?}", t.elapsed()),
        }
    }
}
