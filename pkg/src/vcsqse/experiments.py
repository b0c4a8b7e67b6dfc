"""Experiment drivers: deterministic CSV reproductions of the study figures.

Each experiment walks the bond-length sweep and emits one row per sweep
point per curve with 12-significant-digit values, so repeated runs of the
same configuration are byte-identical. Column schemas are documented in
docs/experiments.md.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import ChannelSpec, lift_to_register, single_qubit_channel
from .config import ConfigError, ExperimentConfig
from .molecule import assemble_hamiltonian, load_sweep, parse_fcidump, \
    spin_orbital_tensors
from .operators import PauliOperator, fermion_to_dense, jordan_wigner, \
    symmetry_operator
from .qse import approximate_lr, build_subspace_direct, fermionic_basis, \
    project_symmetry, qubit_basis, solve_subspace, subspace_expectation
from .rdm import compute_rdms, estimate_pauli
from .vcs import fidelity, no_variation_baseline, solve_vcs

CHANNEL_TOKENS = ("dephasing", "ap", "depol")
_KIND_OF_TOKEN = {"dephasing": "dephasing", "ap": "amplitude_phase",
                  "depol": "depolarizing"}
GROUND_CURVES = ("exact", "rhf", "ph", "ap", "depol", "ph_s2pen")
_CURVE_KIND = {"ph": "dephasing", "ap": "amplitude_phase",
               "depol": "depolarizing", "ph_s2pen": "dephasing"}
DEFAULT_RATIOS = (0.05, 0.05)
S2_PENALTY_WEIGHT = 100.0


class ExperimentError(RuntimeError):
    """Numerical failure, annotated with the offending sweep point."""


@dataclass
class RunResult:
    experiment: str
    header: list
    rows: list
    csv_text: str
    wall_seconds: float
    continuation_events: int
    output: str | None = None

    def summary(self) -> str:
        dest = self.output or "(not written)"
        return (f"{self.experiment}: {len(self.rows)} rows -> {dest} "
                f"in {self.wall_seconds:.2f} s; "
                f"degeneracy-continuation events: {self.continuation_events}")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".12g")


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _map_units(fn, units, threads):
    if threads <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, units))


@dataclass
class _Point:
    bond_length: float
    integrals: object
    h_dense: np.ndarray
    mode_count: int
    symmetry_dense: dict = field(default_factory=dict)
    eigh: tuple = None

    def exact(self):
        if self.eigh is None:
            self.eigh = np.linalg.eigh(self.h_dense)
        return self.eigh


def _prepare(points):
    out = []
    for pt in points:
        h_op = assemble_hamiltonian(pt.integrals)
        m = h_op.mode_count
        sym = {name: fermion_to_dense(symmetry_operator(name, m))
               for name in ("number", "s_squared")}
        out.append(_Point(bond_length=pt.bond_length, integrals=pt.integrals,
                          h_dense=fermion_to_dense(h_op), mode_count=m,
                          symmetry_dense=sym))
    return out


def _channel_for(point: _Point, kind: str, ratios):
    spec = ChannelSpec(kind=kind, tp_over_t1=ratios[0], tp_over_t2=ratios[1])
    return lift_to_register(single_qubit_channel(spec), point.mode_count)


def _ratios(cfg: ExperimentConfig):
    if cfg.channel is None:
        return DEFAULT_RATIOS
    return (cfg.channel.tp_over_t1, cfg.channel.tp_over_t2)


def _sector_indices(point: _Point):
    n_e = point.integrals.nelec
    return [b for b in range(point.h_dense.shape[0]) if bin(b).count("1") == n_e]


def _guarded(fn, point, experiment):
    try:
        return fn()
    except ExperimentError:
        raise
    except Exception as exc:
        raise ExperimentError(
            f"{experiment}: failure at sweep point R={point.bond_length}: {exc}"
        ) from exc


def _fidelity_sweep(cfg: ExperimentConfig):
    points = _prepare(load_sweep(cfg.sweep_manifest))
    ratios = _ratios(cfg)

    def one_channel(token):
        rows, events, prev = [], 0, None
        for point in points:
            def step():
                ch = _channel_for(point, _KIND_OF_TOKEN[token], ratios)
                sol = solve_vcs(point.h_dense, ch, penalties=cfg.penalties,
                                continuation=prev)
                base = no_variation_baseline(point.h_dense, ch,
                                             penalties=cfg.penalties)
                exact_vec = point.exact()[1][:, 0]
                return sol, base, fidelity(sol.output_rho, exact_vec)
            sol, base, fid_exact = _guarded(step, point, "fidelity-sweep")
            prev = sol.input_state
            events += int(sol.continuation_used)
            rows.append((point.bond_length, token, sol.fidelity_io,
                         base.fidelity_io, fid_exact, sol.energy))
        return rows, events

    results = _map_units(one_channel, list(CHANNEL_TOKENS), cfg.threads)
    rows = [row for chunk, _ in results for row in chunk]
    events = sum(ev for _, ev in results)
    header = ["R", "channel", "fidelity_vcs", "fidelity_novar",
              "fidelity_vs_exact", "energy_vcs"]
    return header, rows, events


def _basis_for(cfg: ExperimentConfig, point: _Point):
    if cfg.subspace_kind == "qubit":
        return qubit_basis(point.mode_count, cfg.subspace_order)
    return fermionic_basis(point.mode_count, cfg.subspace_order)


def _spectrum(cfg: ExperimentConfig):
    points = _prepare(load_sweep(cfg.sweep_manifest))

    def one_point(point):
        def step():
            w_full, v = point.exact()
            psi0 = v[:, 0]
            prob = build_subspace_direct(_basis_for(cfg, point), point.h_dense,
                                         psi0, point.symmetry_dense)
            if cfg.projection is not None:
                name, target, window = cfg.projection
                prob = project_symmetry(prob, name, target, window,
                                        cfg.metric_cutoff)
            spec = solve_subspace(prob, cfg.metric_cutoff)
            sector = _sector_indices(point)
            w_sector = np.linalg.eigvalsh(point.h_dense[np.ix_(sector, sector)])
            rows = [(point.bond_length, "qse", i, float(e))
                    for i, e in enumerate(spec.eigenvalues)]
            rows += [(point.bond_length, "fci_sector", i, float(e))
                     for i, e in enumerate(w_sector)]
            rows += [(point.bond_length, "fci_full", i, float(e))
                     for i, e in enumerate(w_full)]
            return rows
        return _guarded(step, point, "spectrum")

    results = _map_units(one_point, points, cfg.threads)
    rows = [row for chunk in results for row in chunk]
    return ["R", "method", "level", "energy"], rows, 0


def _qse_repair(cfg: ExperimentConfig):
    points = _prepare(load_sweep(cfg.sweep_manifest))
    ratios = _ratios(cfg)
    kind = cfg.channel.kind if cfg.channel is not None else "amplitude_phase"
    proj = cfg.projection or ("s_squared", 0.0, 0.5)

    def one_reference(ref_name):
        rows, events, prev = [], 0, None
        solver = solve_vcs if ref_name == "vcs" else no_variation_baseline
        for point in points:
            def step():
                ch = _channel_for(point, kind, ratios)
                sol = solver(point.h_dense, ch, penalties=cfg.penalties,
                             continuation=prev)
                basis = fermionic_basis(point.mode_count, 1)
                e_exact = float(point.exact()[0][0])
                # unconstrained expansion around the mixed channel output
                prob_out = build_subspace_direct(basis, point.h_dense,
                                                 sol.output_rho,
                                                 point.symmetry_dense)
                spec_out = solve_subspace(prob_out, cfg.metric_cutoff)
                s2_qse = subspace_expectation(prob_out, "s_squared",
                                              spec_out.eigenvectors[:, 0])
                # symmetry-projected expansion around the pure input state
                prob_in = build_subspace_direct(basis, point.h_dense,
                                                sol.input_state,
                                                point.symmetry_dense)
                projected = project_symmetry(prob_in, proj[0], proj[1], proj[2],
                                             cfg.metric_cutoff)
                spec_in = solve_subspace(projected, cfg.metric_cutoff)
                s2_proj = subspace_expectation(projected, "s_squared",
                                               spec_in.eigenvectors[:, 0])
                return (sol, e_exact, float(spec_out.eigenvalues[0]), s2_qse,
                        float(spec_in.eigenvalues[0]), s2_proj)
            sol, e_exact, e_qse, s2_qse, e_proj, s2_proj = _guarded(
                step, point, "qse-repair")
            prev = sol.input_state
            events += int(sol.continuation_used)
            rows.append((point.bond_length, ref_name, e_exact, sol.energy,
                         e_qse, e_proj,
                         sol.symmetry_expectations["s_squared"], s2_qse, s2_proj))
        return rows, events

    results = _map_units(one_reference, ["vcs", "novar"], cfg.threads)
    rows = [row for chunk, _ in results for row in chunk]
    events = sum(ev for _, ev in results)
    header = ["R", "reference", "energy_exact", "energy_ref", "energy_qse",
              "energy_qse_s2proj", "s2_ref", "s2_qse", "s2_qse_s2proj"]
    return header, rows, events


def _ground_channels(cfg: ExperimentConfig):
    points = _prepare(load_sweep(cfg.sweep_manifest))
    ratios = _ratios(cfg)

    def one_curve(curve):
        rows, events, prev = [], 0, None
        for point in points:
            def step():
                s2d = point.symmetry_dense["s_squared"]
                if curve == "exact":
                    w, v = point.exact()
                    vec = v[:, 0]
                    return None, float(w[0]), float(np.real(vec.conj() @ s2d @ vec))
                if curve == "rhf":
                    det = (1 << point.integrals.nelec) - 1
                    return (None, float(np.real(point.h_dense[det, det])),
                            float(np.real(s2d[det, det])))
                penalties = list(cfg.penalties)
                if curve == "ph_s2pen":
                    penalties = [("s_squared", 0.0, S2_PENALTY_WEIGHT)]
                ch = _channel_for(point, _CURVE_KIND[curve], ratios)
                sol = solve_vcs(point.h_dense, ch, penalties=penalties,
                                continuation=prev)
                return (sol, sol.energy,
                        sol.symmetry_expectations["s_squared"])
            sol, energy, s2 = _guarded(step, point, "ground-channels")
            if sol is not None:
                prev = sol.input_state
                events += int(sol.continuation_used)
            rows.append((point.bond_length, curve, energy, s2))
        return rows, events

    results = _map_units(one_curve, list(GROUND_CURVES), cfg.threads)
    rows = [row for chunk, _ in results for row in chunk]
    events = sum(ev for _, ev in results)
    return ["R", "curve", "energy", "s2"], rows, events


def _approx_spectrum(cfg: ExperimentConfig, levels: int = 3):
    points = _prepare(load_sweep(cfg.sweep_manifest))

    def one_point(point):
        def step():
            w, v = point.exact()
            psi0 = v[:, 0]
            h1, h2, core = spin_orbital_tensors(point.integrals)
            rdms = compute_rdms(psi0, 4)
            e_g = float(np.real(psi0.conj() @ point.h_dense @ psi0))
            basis = fermionic_basis(point.mode_count, 1)
            direct = build_subspace_direct(basis, point.h_dense, psi0)
            zc = approximate_lr("ZC", h1, h2, rdms, e_g, core_energy=core)
            za = approximate_lr("ZA", h1, h2, rdms, e_g, core_energy=core)
            rows = []
            for method, prob in (("exact", direct), ("zc", zc), ("za", za)):
                spec = solve_subspace(prob, cfg.metric_cutoff)
                for i in range(min(levels, spec.retained_dim)):
                    rows.append((point.bond_length, method, i,
                                 float(spec.eigenvalues[i])))
            return rows
        return _guarded(step, point, "approx-spectrum")

    results = _map_units(one_point, points, cfg.threads)
    rows = [row for chunk in results for row in chunk]
    return ["R", "method", "level", "energy"], rows, 0


_EXPERIMENTS = {
    "fidelity-sweep": _fidelity_sweep,
    "spectrum": _spectrum,
    "qse-repair": _qse_repair,
    "ground-channels": _ground_channels,
    "approx-spectrum": _approx_spectrum,
}


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    """Execute a sweep experiment and (optionally) write its CSV."""
    cfg.validate()
    if cfg.experiment == "single-point":
        raise ConfigError("single-point produces a report; use single_point()")
    start = time.perf_counter()
    header, rows, events = _EXPERIMENTS[cfg.experiment](cfg)
    wall = time.perf_counter() - start
    text = _csv(header, rows)
    if cfg.output:
        out = Path(cfg.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    return RunResult(experiment=cfg.experiment, header=header, rows=rows,
                     csv_text=text, wall_seconds=wall,
                     continuation_events=events, output=cfg.output)


def _sampled_energy(h_pauli: PauliOperator, psi: np.ndarray, shots: int, seed: int):
    total, var = 0.0, 0.0
    n = h_pauli.qubit_count
    identity = "I" * n
    for i, (word, coeff) in enumerate(sorted(h_pauli.terms.items())):
        c = float(np.real(coeff))
        if word == identity:
            total += c
            continue
        est, err = estimate_pauli(psi, PauliOperator(n, {word: 1.0}), shots,
                                  seed + i)
        total += c * est
        var += (c * err) ** 2
    return total, var ** 0.5


def single_point(cfg: ExperimentConfig) -> str:
    """Human-readable report for one fixture."""
    cfg.validate()
    if cfg.experiment != "single-point":
        raise ConfigError(f"single_point() got experiment {cfg.experiment!r}")
    ints = parse_fcidump(Path(cfg.fcidump).read_text())
    h_op = assemble_hamiltonian(ints)
    m = h_op.mode_count
    h_dense = fermion_to_dense(h_op)
    sym = {name: fermion_to_dense(symmetry_operator(name, m))
           for name in ("number", "s_squared")}
    w, v = np.linalg.eigh(h_dense)
    sector = [b for b in range(1 << m) if bin(b).count("1") == ints.nelec]
    w_sector = np.linalg.eigvalsh(h_dense[np.ix_(sector, sector)])

    lines = [f"fixture: {cfg.fcidump}",
             f"norb={ints.norb} nelec={ints.nelec} ms2={ints.ms2} "
             f"core_energy={_fmt(ints.core_energy)}",
             f"fci ground (N={ints.nelec} sector): {_fmt(w_sector[0])}",
             f"fci levels (N={ints.nelec} sector): "
             + " ".join(_fmt(x) for x in w_sector),
             f"fci ground (full space):          {_fmt(w[0])}"]

    psi0 = v[:, 0]
    if cfg.channel is not None:
        ch = lift_to_register(single_qubit_channel(cfg.channel), m)
        sol = solve_vcs(h_dense, ch, penalties=cfg.penalties)
        base = no_variation_baseline(h_dense, ch, penalties=cfg.penalties)
        lines += [f"channel: {cfg.channel.kind} tp/t1={_fmt(cfg.channel.tp_over_t1)} "
                  f"tp/t2={_fmt(cfg.channel.tp_over_t2)}",
                  f"  vcs energy={_fmt(sol.energy)} fidelity_io={_fmt(sol.fidelity_io)} "
                  f"<N>={_fmt(sol.symmetry_expectations['number'])} "
                  f"<S2>={_fmt(sol.symmetry_expectations['s_squared'])}",
                  f"  no-variation energy={_fmt(base.energy)} "
                  f"fidelity_io={_fmt(base.fidelity_io)}",
                  f"  fidelity_vs_exact={_fmt(fidelity(sol.output_rho, psi0))}"]
        reference_state = sol.output_rho
    else:
        reference_state = psi0

    basis = (qubit_basis(m, cfg.subspace_order) if cfg.subspace_kind == "qubit"
             else fermionic_basis(m, cfg.subspace_order))
    prob = build_subspace_direct(basis, h_dense, reference_state, sym)
    if cfg.projection is not None:
        name, target, window = cfg.projection
        prob = project_symmetry(prob, name, target, window, cfg.metric_cutoff)
    spec = solve_subspace(prob, cfg.metric_cutoff)
    ground = spec.eigenvectors[:, 0]
    lines += [f"subspace: kind={cfg.subspace_kind} k={cfg.subspace_order} "
              f"size={len(basis)} retained_dim={spec.retained_dim}",
              "subspace levels: " + " ".join(_fmt(x) for x in spec.eigenvalues),
              f"subspace ground <N>={_fmt(subspace_expectation(prob, 'number', ground))} "
              f"<S2>={_fmt(subspace_expectation(prob, 's_squared', ground))}"]

    if cfg.shots is not None:
        count, seed = cfg.shots
        est, err = _sampled_energy(jordan_wigner(h_op), psi0, count, seed)
        lines += [f"sampled ground energy ({count} shots/term, seed {seed}): "
                  f"{_fmt(est)} +- {_fmt(err)} (exact {_fmt(w[0])})"]
        if cfg.sampled_rdms:
            lines += _sampled_rdm_lines(cfg, ints, psi0, count, seed, w_sector[0])
    return "\n".join(lines) + "\n"


def _sampled_rdm_lines(cfg, ints, psi0, count, seed, e_sector):
    """Feed measurement-pathway RDMs into the subspace machinery."""
    from .qse import build_lr_from_rdms as _lr
    from .rdm import contract_energy, sample_rdms
    h1, h2, core = spin_orbital_tensors(ints)
    rdms = sample_rdms(psi0, 4, count, seed)
    e_meas = contract_energy(h1, h2, rdms, core_energy=core)
    lines = [f"sampled-rdm energy ({count} shots/word, seed {seed}): "
             f"{_fmt(e_meas)} (exact {_fmt(e_sector)})"]
    prob = _lr(h1, h2, rdms, core_energy=core)
    try:
        spec = solve_subspace(prob, cfg.metric_cutoff)
        lines.append(f"sampled-rdm qse ground: {_fmt(spec.eigenvalues[0])} "
                     f"(retained_dim {spec.retained_dim})")
    except ValueError as exc:
        lines.append(f"sampled-rdm qse ground: not solvable at "
                     f"metric_cutoff={_fmt(cfg.metric_cutoff)} ({exc}); "
                     "raise --metric-cutoff above the sampling noise")
    return lines
