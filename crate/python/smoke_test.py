"""Smoke test for the Python bindings.

Build and install first, for example:
    pip install maturin
    maturin develop --release -m crates/py/Cargo.toml
"""

import json
import os
import sys

import marc

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    channel = marc.Channel.from_file(fixture("bottleneck.json"))
    assert channel.sizes() == (2, 2, 2, 4, 2), channel.sizes()
    assert channel.classes()["madrc"][0]

    dist = marc.Distribution.from_file(fixture("bottleneck_uniform.json"))
    region = marc.region(channel, dist, "madrc")
    assert close(region.bound([1, 2]), 1.0), region
    assert region.contains(0.0, 0.5, 0.5)
    assert not region.contains(0.0, 1.0, 1.0)
    assert region.includes(region)
    value, point = region.support([0.0, 1.0, 1.0])
    assert close(value, 1.0)

    general = marc.region(channel, dist, "general", "madrc")
    assert general.includes(region)
    again = marc.Region.from_json(general.to_json())
    assert again.constraints() == general.constraints()

    gaps = marc.check(channel, "mardrc", trials=3, seed=1)
    assert len(gaps) == 3 and max(gaps) <= 1e-9, gaps

    value, point, law = marc.maximize(channel, restarts=2, samples=4, seed=3)
    assert value >= 0.99, value
    assert "pu1_u0xr" in json.loads(law)

    config = json.dumps({
        "n": 4, "B": 2, "eps": 8, "trials": 2, "seed": 5,
        "rates": {"r0": 0, "r1p": 0, "r1pp": 0, "r2p": 0, "r2pp": 0},
    })
    report = marc.simulate(channel, dist, config)
    assert report["sink_block_error_rate"] == 0.0, report

    try:
        marc.Channel.from_file(fixture("bad_row.json"))
    except ValueError:
        pass
    else:
        raise AssertionError("bad row accepted")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
