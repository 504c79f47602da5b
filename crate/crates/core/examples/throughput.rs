use std::time::Instant;

use risfd::montecarlo::estimate_ber;
use risfd::SystemParams;

fn main() {
    for l in [16, 64, 256] {
        let p = SystemParams {
            elements: l,
            snr_db: -30.0,
            trials: 100_000,
            ..SystemParams::default()
        };
        let t = Instant::now();
        let pt = estimate_ber(&p).unwrap();
        let dt = t.elapsed().as_secs_f64();
        println!("L={l}: ber={:.3e} {:.2} us/trial", pt.ber, dt / p.trials as f64 * 1e6);
    }
}
