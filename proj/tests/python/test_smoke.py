import csv
import io
import math
import os
import subprocess

import pytest

hp = pytest.importorskip("heunpulse")


def test_params_and_pulses():
    p = hp.DimensionlessParams.from_physical(0.02, 0.08, 0.2)
    assert p.gamma == pytest.approx(0.25)
    assert p.beta == pytest.approx(2.5)
    spec = hp.PulseSpec.omega_plus(p)
    assert spec.kind == "omega_plus"
    assert spec.omega(0.0) == pytest.approx(0.25)
    assert spec.omega_many([0.0, 1.0])[0] == spec.omega(0.0)
    sech = hp.PulseSpec.sech(hp.DimensionlessParams(gamma=1.0))
    assert hp.pulse_area(sech, -math.inf, math.inf) == pytest.approx(math.pi, rel=1e-12)


def test_errors_map_to_python_exceptions():
    with pytest.raises(hp.DomainError):
        hp.DimensionlessParams(gamma=-1.0)
    with pytest.raises(hp.DomainError):
        hp.PulseSpec.omega_delta(1.0, hp.DimensionlessParams(gamma=0.1))
    with pytest.raises(hp.DivergenceError):
        hp.hyp2f1_at_one(1.0, 1.0, 2.0)
    assert issubclass(hp.DivergenceError, hp.DomainError)


def test_analytic_matches_numeric():
    p = hp.DimensionlessParams(1.0, 2.5, 0.25)
    spec = hp.PulseSpec.omega_delta(2.0, p)
    num = hp.evolve_numeric(spec, hp.IntegratorConfig(-20.0, 20.0, 81))
    an = hp.analytic_trajectory(spec, num["tau"])
    worst = max(abs(a - b) for a, b in zip(an["ca"], num["ca"]))
    assert worst < 1e-6
    assert num["max_norm_defect"] < 1e-9
    tail = hp.final_population_numeric(spec, hp.IntegratorConfig(-40.0, 60.0))
    assert hp.final_population(spec) == pytest.approx(tail, abs=1e-5)


def test_special_functions():
    assert hp.hyp2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(2.0 * math.log(2.0))
    # Heun with c = 1 collapses to 2F1(a, b; u; z).
    h = hp.heun_local(0.3, 0.7, 1.0, 0.21, 1.5, 0.2, 0.3, 0.25)
    assert h == pytest.approx(hp.hyp2f1(0.3, 0.7, 1.5, 0.25), rel=1e-12)


def test_xuv_preset():
    est = hp.signal_rabi(hp.estimate_preset())
    assert est["pulse_energy"] > 0.0
    assert 1e-13 < est["coherence_lifetime"] < 1e-11
    assert hp.theta_profile(1.0, 0.2, 1.0, 0.0) == 0.0


def test_verify_report_schema():
    rep = hp.verify_report()
    assert list(rep) == ["schema_version", "overall", "checks"]
    assert len(rep["checks"]) == 10
    statuses = [c["status"] for c in rep["checks"]]
    assert rep["overall"] == ("pass" if all(s == "pass" for s in statuses) else "fail")


@pytest.mark.skipif(not os.environ.get("HEUNPULSE_CLI"), reason="CLI path not provided")
def test_cli_csv_round_trip(tmp_path):
    out = tmp_path / "evolve.csv"
    subprocess.run(
        [os.environ["HEUNPULSE_CLI"], "evolve", "--kind", "sech", "--gamma", "0.5",
         "--samples", "11", "-o", str(out)],
        check=True,
    )
    raw = out.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["tau", "omega", "re_ca", "im_ca", "re_cb", "im_cb", "pa", "pb"]
    for row in rows[1:]:
        # %.17g text re-parses to the same double and re-renders identically.
        for field in row:
            assert "%.17g" % float(field) == field
    p = hp.DimensionlessParams(gamma=0.5)
    spec = hp.PulseSpec.sech(p)
    for row in rows[1:]:
        assert float(row[1]) == spec.omega(float(row[0]))
