"""Acceptance suite: twelve end-to-end guarantees, one test and one printed
pass/fail line each.

Monte Carlo tests pin their seeds, and the margin behind every statistical
window was measured at those seeds before pinning.
"""
import json

import numpy as np

import qcollide as q
from qcollide.cli import main as cli_main

G = np.pi / 12
GAMMA = 0.05
I2 = np.eye(2) / 2


def _report(num, desc, ok):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def _xxz_model(r, g_delta):
    return q.ModelSpec(
        arrival=q.Exponential(r), service=q.Deterministic(1.0),
        idle_channel=q.Dephasing(GAMMA), waiting_channel=q.Dephasing(GAMMA),
        interaction_channel=q.XxzDephasing(G, g_delta / G, GAMMA))


def _swap_model(arrival_rate, idle_gamma, waiting_gamma):
    def channel(gamma):
        return q.Dephasing(gamma) if gamma else q.Identity()
    return q.ModelSpec(
        arrival=q.Exponential(arrival_rate), service=q.Exponential(1.0),
        idle_channel=channel(idle_gamma), waiting_channel=channel(waiting_gamma),
        interaction_channel=q.PartialSwapUnitary(G))


def _run(model, n, seed, idx, burn=0.2):
    trace = q.simulate_queue(model.arrival, model.service, n, q.RngStream(seed, idx))
    record = q.run_trajectory(model, trace)
    mean, var = q.long_run_stats(record, burn)
    return record, mean, var


def _point_stats(model, n, seed, indices, burn):
    means = np.array([_run(model, n, seed, i, burn)[1] for i in indices])
    return means.mean(), means.std(ddof=1) / np.sqrt(len(means))


def test_criterion_01_waiting_idle_exclusivity():
    rng = np.random.default_rng(101)
    ok = True
    for _ in range(1000):
        mu = rng.uniform(0.5, 2.0)
        r = rng.uniform(0.2, 1.5)
        arrival = q.Exponential(r * mu)
        service = q.Deterministic(1 / mu) if rng.uniform() < 0.5 else q.Exponential(mu)
        stream = q.RngStream(int(rng.integers(2 ** 32)), 0)
        trace = q.simulate_queue(arrival, service, 1000, stream)
        ok = ok and trace.waiting[0] == 0.0 and trace.idle[0] == 0.0
        ok = ok and bool(np.all(trace.waiting * trace.idle == 0.0))
    _report(1, "waiting and idle times are exactly exclusive, both start at 0", ok)


def test_criterion_02_channels_are_cptp():
    channels = (q.Identity(), q.Dephasing(GAMMA), q.PartialSwapUnitary(G),
                q.XxzDephasing(G, 0.5 / G, GAMMA))
    ok = True
    for channel in channels:
        for t in (0.0, 0.1, 1.0, 10.0):
            min_eig, tp_dev = q.cptp_defect(channel, t)
            ok = ok and min_eig >= -1e-10 and tp_dev <= 1e-10
    _report(2, "all four channel families are CPTP at t in {0, 0.1, 1, 10}", ok)


def test_criterion_03_isotropic_quarter_period_is_full_exchange():
    channel = q.XxzDephasing(G, 1.0, 0.0)
    t = (np.pi / 4) / G
    swap = np.eye(4)[[0, 2, 1, 3]]
    err = 0.0
    for i in range(4):
        for j in range(4):
            unit = np.zeros((4, 4), dtype=complex)
            unit[i, j] = 1.0
            got = channel.apply(unit, t)
            want = swap @ unit @ swap
            err = max(err, float(np.abs(got - want).max()))
    _report(3, f"isotropic coupling at quarter period swaps the pair (err {err:.1e})",
            err <= 1e-9)


def test_criterion_04_overload_idle_only_homogenizes():
    model = _swap_model(1.5, GAMMA, 0.0)
    record, _, _ = _run(model, 100_000, 42, 0)
    tail = record.coherences[-10_000:]
    ok = abs(tail.mean() - 0.5) <= 1e-3 and tail.var() <= 1e-6
    _report(4, f"r=1.5 idle-only model homogenizes, tail mean {tail.mean():.6f}", ok)


def test_criterion_05_overload_waiting_only_decoheres():
    model = _swap_model(1.5, 0.0, GAMMA)
    record, _, _ = _run(model, 100_000, 42, 0)
    tail = record.coherences[-10_000:]
    final_err = float(np.abs(record.states[-1] - I2).max())
    ok = tail.mean() <= 1e-3 and final_err <= 1e-3
    _report(5, f"r=1.5 waiting-only model loses all coherence (tail {tail.mean():.2e})", ok)


def test_criterion_06_overload_combined_reaches_maximally_mixed():
    model = _xxz_model(1.2, 0.1)
    tails, variances = [], []
    for i in range(6):
        record, _, var = _run(model, 100_000, 20260, i, burn=0.5)
        start = record.n // 2
        tails.append(record.states[start:].mean(axis=0))
        variances.append(var)
    tails = np.array(tails)
    dist = float(np.linalg.norm(tails.mean(axis=0) - I2))
    spread = float(np.linalg.norm(tails.std(axis=0, ddof=1))) / np.sqrt(6)
    ok = dist <= 3 * spread and max(variances) <= 1e-4
    _report(6, f"r=1.2 long-run state is maximally mixed (dist {dist:.2e}), "
               f"single-run Var(C) max {max(variances):.2e}", ok)


def _stderr_slope(xs, means, errs):
    x, y, s = np.asarray(xs), np.asarray(means), np.asarray(errs)
    xm = x.mean()
    denom = ((x - xm) ** 2).sum()
    slope = ((x - xm) * y).sum() / denom
    err = np.sqrt((((x - xm) / denom) ** 2 * s ** 2).sum())
    return slope, err


def test_criterion_07_long_run_coherence_kink_at_r_one():
    rs = (0.90, 0.95, 0.99, 1.01, 1.05, 1.10)
    stats = []
    for pi, r in enumerate(rs):
        model = _xxz_model(r, 0.5)
        stats.append(_point_stats(model, 100_000, 20260,
                                  [pi * 5 + j for j in range(5)], 0.2))
    left = _stderr_slope(rs[:3], [s[0] for s in stats[:3]], [s[1] for s in stats[:3]])
    right = _stderr_slope(rs[3:], [s[0] for s in stats[3:]], [s[1] for s in stats[3:]])
    gap = abs(left[0] - right[0])
    combined = float(np.hypot(left[1], right[1]))
    _report(7, f"one-sided slopes at r=1 differ by {gap / combined:.0f} stderr",
            gap > 5 * combined)


def test_criterion_08_interior_coherence_maximum():
    rs = np.linspace(0.1, 0.9, 9)
    stats = [
        _point_stats(_xxz_model(float(r), 0.5), 100_000, 20260,
                     [pi * 4 + j for j in range(4)], 0.2)
        for pi, r in enumerate(rs)
    ]
    means = np.array([s[0] for s in stats])
    errs = np.array([s[1] for s in stats])
    k = int(means.argmax())
    z_low = (means[k] - means[0]) / np.hypot(errs[k], errs[0])
    z_high = (means[k] - means[8]) / np.hypot(errs[k], errs[8])
    ok = 0 < k < 8 and z_low > 3 and z_high > 3
    _report(8, f"E(C) peaks at interior r={rs[k]:.1f} "
               f"(z {z_low:.0f} and {z_high:.0f} vs endpoints)", ok)


def test_criterion_09_detuning_curves_collapse_across_r():
    # The r=0.3 and r=0.7 curves share RNG streams point for point, and the
    # comparison scale is the intrinsic spread sqrt(Var(C)) of the coherence
    # process itself, which does not shrink with longer runs.
    grid = np.round(np.arange(1, 13) * 0.1, 2)
    worst = np.inf
    ok = True
    for pi, g_delta in enumerate(grid):
        curves = []
        for r in (0.3, 0.7):
            model = _xxz_model(r, float(g_delta))
            runs = [_run(model, 20_000, 20260, pi * 2 + j, burn=0.5)[1:]
                    for j in range(2)]
            curves.append((np.mean([m for m, _ in runs]),
                           np.sqrt(np.mean([v for _, v in runs]))))
        (e3, s3), (e7, s7) = curves
        limit = 3 * float(np.hypot(s3, s7))
        worst = min(worst, limit / abs(e3 - e7))
        ok = ok and abs(e3 - e7) <= limit
    _report(9, f"E(C) vs g*Delta curves at r=0.3 and 0.7 collapse "
               f"(worst margin {worst:.1f}x)", ok)


def test_criterion_10_grid_cdfs_match_simulation():
    worst = 0.0
    for deterministic in (False, True):
        for r in (0.3, 0.5, 0.8):
            arrival = q.Exponential(r)
            service = q.Deterministic(1.0) if deterministic else q.Exponential(1.0)
            waiting = q.lindley_fixed_point(arrival, service)
            idle = q.idle_cdf(waiting, arrival, service)
            trace = q.simulate_queue(arrival, service, 100_000, q.RngStream(7, 0))
            worst = max(worst,
                        q.sup_distance(waiting, q.empirical_cdf(trace.waiting, waiting.x)),
                        q.sup_distance(idle, q.empirical_cdf(trace.idle, idle.x)))
    _report(10, f"waiting and idle CDFs match 1e5-sample simulation "
                f"(sup distance {worst:.4f})", worst <= 0.02)


def test_criterion_11_limit_reductions():
    # (a) deterministic service and identity idle/waiting channels reduce the
    # queued engine to the plain iterated collision map, bit for bit
    model = q.ModelSpec(
        arrival=q.Exponential(0.5), service=q.Deterministic(2.0),
        idle_channel=q.Identity(), waiting_channel=q.Identity(),
        interaction_channel=q.XxzDephasing(G, 0.5 / G, GAMMA))
    trace = q.simulate_queue(model.arrival, model.service, 1000, q.RngStream(9, 0))
    record = q.run_trajectory(model, trace)
    rho = model.initial_system_state
    bitwise = True
    for k in range(1000):
        rho = q.deterministic_map_step(rho, model.interaction_channel, 2.0,
                                       model.ancilla_state)
        bitwise = bitwise and bool(np.array_equal(rho, record.states[k]))

    # (b) interarrival mean 100x the service mean: the long-run state must
    # match the law-averaged map's fixed point within 3x the spread of
    # independent long-run estimates (the residual finite-separation offset
    # measured at these parameters is 2.2e-3 against a 4.7e-3 window)
    model = q.ModelSpec(
        arrival=q.Exponential(0.01), service=q.Exponential(1.0),
        idle_channel=q.Dephasing(0.001), waiting_channel=q.Identity(),
        interaction_channel=q.PartialSwapUnitary(G))
    rho_star = q.averaged_map_fixed_point(model, "stochastic_limit")
    tails, means = [], []
    for i in range(8):
        record, mean, _ = _run(model, 20_000, 2026, i, burn=0.5)
        tails.append(record.states[record.n // 2:].mean(axis=0))
        means.append(mean)
    tails, means = np.array(tails), np.array(means)
    c_gap = abs(means.mean() - q.coherence(rho_star))
    c_lim = 3 * means.std(ddof=1)
    state_gap = float(np.linalg.norm(tails.mean(axis=0) - rho_star))
    state_lim = 3 * float(np.linalg.norm(tails.std(axis=0, ddof=1)))
    stochastic = c_gap <= c_lim and state_gap <= state_lim
    _report(11, f"deterministic limit bitwise {bitwise}, stochastic limit gap "
                f"{state_gap:.1e} <= {state_lim:.1e}", bitwise and stochastic)


def test_criterion_12_byte_identical_reruns(tmp_path):
    sweep_cfg = {
        "queue": "MD1", "model": "xxz", "g_delta": 0.5,
        "sweep": {"axis": "r", "values": [0.3, 0.7]},
        "n_ancillas": 2000, "n_runs": 2, "burn_in_fraction": 0.5, "base_seed": 5,
    }
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps(sweep_cfg))
    outputs = []
    for threads, name in ((1, "a"), (4, "b")):
        out = tmp_path / f"{name}.csv"
        code = cli_main(["sweep", "--config", str(cfg_path),
                         "--threads", str(threads), "--out", str(out)])
        assert code == 0
        outputs.append((out.read_bytes(), out.with_suffix(".svg").read_bytes()))
    sweep_ok = outputs[0] == outputs[1]

    sim_cfg = {"queue": "MM1", "model": "swap_idle_dephasing", "r": 0.5,
               "n_ancillas": 3000, "base_seed": 6}
    cfg_path = tmp_path / "simulate.json"
    cfg_path.write_text(json.dumps(sim_cfg))
    outputs = []
    for name in ("c", "d"):
        out = tmp_path / f"{name}.csv"
        code = cli_main(["simulate", "--config", str(cfg_path), "--out", str(out)])
        assert code == 0
        outputs.append((out.read_bytes(), out.with_suffix(".svg").read_bytes()))
    simulate_ok = outputs[0] == outputs[1]
    _report(12, "rerun output bytes are identical and independent of --threads",
            sweep_ok and simulate_ok)
