//! Regenerates the JSON files under `fixtures/`.

use std::fs;
use std::path::Path;

use marc_core::fixtures;
use marc_core::io;
use marc_core::sim::{RateSplit, SimConfig};

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    fs::create_dir_all(&dir)?;
    let put = |name: &str, text: String| fs::write(dir.join(name), text);

    let (bn, bn_in) = fixtures::bottleneck();
    put("bottleneck.json", io::channel_to_json(&bn))?;
    put("bottleneck_uniform.json", io::relay_conditioned_to_json(&bn_in))?;
    put("bottleneck_factorized.json", io::factorized_to_json(&bn_in.inputs_as_auxiliaries()))?;
    put(
        "bottleneck_kw.json",
        "{\n  \"px1\": [0.5, 0.5],\n  \"px2\": [0.5, 0.5],\n  \"pxr_x1x2\": [[[0.5, 0.5], [0.5, 0.5]], [[0.5, 0.5], [0.5, 0.5]]]\n}\n".into(),
    )?;

    let (xor, xor_in) = fixtures::xor_relay();
    put("xor_relay.json", io::channel_to_json(&xor))?;
    put("xor_relay_uniform.json", io::relay_conditioned_to_json(&xor_in))?;

    let (mac, mac_in) = fixtures::noiseless_mac();
    put("mac_noiseless.json", io::channel_to_json(&mac))?;
    put("mac_uniform.json", io::factorized_to_json(&mac_in.to_factorized()))?;

    let (marco, marco_in) = fixtures::marco_noiseless();
    put("marco.json", io::channel_to_json(&marco))?;
    put("marco_uniform.json", io::relay_conditioned_to_json(&marco_in))?;

    // First kernel row has its mass on (y_R, y_D) = (0, 0); make it sum to 0.9.
    let bad = io::channel_to_json(&bn).replacen("[1.0, 0.0]", "[0.9, 0.0]", 1);
    put("bad_row.json", bad)?;

    let cfg = SimConfig {
        n: 8,
        blocks: 3,
        eps: 8.0,
        trials: 200,
        seed: 2024,
        shared_codebook: false,
    };
    let inside = RateSplit {
        r1p: 0.25,
        r2p: 0.25,
        ..RateSplit::default()
    };
    let outside = RateSplit {
        r1p: 0.75,
        r2p: 0.75,
        ..RateSplit::default()
    };
    put("sim_inside.json", io::sim_config_to_json(&cfg, &inside))?;
    put("sim_outside.json", io::sim_config_to_json(&cfg, &outside))?;
    Ok(())
}
