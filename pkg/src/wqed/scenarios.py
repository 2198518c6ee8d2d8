"""Named scenarios and their evaluation into tabular data.

A scenario is a plain JSON-able dict: a system (builder reference or
explicit atoms), a drive grid, an optional tau grid, the requested output
kinds, and optional parameter variants evaluated as tagged row blocks.
The built-in scenarios pin the parameter sets of the headline figures so
they can be invoked by name.

Detuning grids support symbolic forms resolved against each variant's
geometry: "resonant" places the probe on the narrow single-excitation
polariton (computed from the numerical spectrum, restricted to states the
drive actually reaches), "resonant_span" spans a multiple of that detuning,
and "coupling_span" brackets the collective coupling sqrt(2 N Gamma gamma).
A "resonant_span" grid with avoid_zero replaces the exact zero-detuning
point by a half step: the single-photon amplitude interferes to zero at
delta = 0, where the drive-free g2 limit is singular.
"""

from __future__ import annotations

import numpy as np

from .model import (ConfigError, DriveSpec, SystemConfig, AtomSpec,
                    ValidatedSystem, canonical_three_atom,
                    n_atom_mirror_config, validate)
from .subspace import enumerate_basis
from .spectral import (SPECTRUM_CSV_COLUMNS, SpectrumRow,
                       drive_accessible_single_excitation, spectrum_report)
from .lindblad import (DegenerateSteadyStateError, build_liouvillian,
                       steady_state)
from .collective import collective_modes, two_excitation_census, polariton_census
from .correlations import (emission_operator, g2_regression, g2_zero_analytic,
                           g2_zero_regression, zeno_diagnostics)
from .oracle import (mode_reduction_check, long_time_steady_oracle,
                     steady_state_cross_check)

OUTPUT_KINDS = ("spectrum", "g2_zero", "g2_tau", "modes", "census", "zeno", "oracle")

CSV_COLUMNS = {
    "g2_tau": ("variant", "epsilon", "delta", "tau", "g2"),
    "modes": ("variant", "mode_index", "label", "re_decay", "im_decay", "coupling"),
    "census": ("variant", "quantity", "value"),
    "zeno": ("variant", "delta", "channel", "re_eigenvalue", "im_eigenvalue",
             "raw_amplitude_abs", "amplitude", "ratio"),
    "spectrum": SPECTRUM_CSV_COLUMNS,
}


def resonant_detuning(system: ValidatedSystem) -> float:
    """Detuning of the narrow drive-accessible single-excitation polariton.

    Takes the two narrowest eigenvalues the medium atom can reach and
    returns the real part of the negative branch of that polariton pair.
    """
    w = drive_accessible_single_excitation(system)
    cand = sorted(w, key=lambda z: abs(z.imag))[:2]
    return float(min(cand, key=lambda z: z.real).real)


def build_system(spec: dict) -> ValidatedSystem:
    builder = spec.get("builder", "explicit")
    if builder == "canonical":
        cfg = canonical_three_atom(gamma=spec["gamma"], Gamma=spec.get("Gamma", 1.0),
                                   d=spec.get("d", 0.25))
    elif builder == "n_atom":
        cfg = n_atom_mirror_config(N=spec["N"], gamma=spec["gamma"],
                                   Gamma=spec.get("Gamma", 1.0))
    elif builder == "explicit":
        atoms = tuple(AtomSpec(position=a["position"], rate=a["rate"], role=a["role"])
                      for a in spec["atoms"])
        cfg = SystemConfig(atoms=atoms)
    else:
        raise ConfigError([f"unknown system builder {builder!r}"])
    return validate(cfg)


def resolve_epsilons(drive_spec: dict, system: ValidatedSystem) -> list[float]:
    eps = drive_spec.get("epsilon", [0.0])
    if isinstance(eps, dict):
        if eps.get("scale") != "gamma":
            raise ConfigError([f"unknown epsilon scale {eps.get('scale')!r}"])
        return [float(v) * system.medium_rate for v in eps["values"]]
    if isinstance(eps, (int, float)):
        return [float(eps)]
    return [float(v) for v in eps]


def resolve_deltas(drive_spec: dict, system: ValidatedSystem) -> list[float]:
    dl = drive_spec.get("delta", [0.0])
    if isinstance(dl, dict):
        kind = dl.get("kind")
        if kind == "resonant":
            r = resonant_detuning(system)
            return [float(s) * abs(r) for s in dl.get("signs", [-1])]
        if kind == "resonant_span":
            r = abs(resonant_detuning(system))
            grid = np.linspace(-dl["span"] * r, dl["span"] * r, int(dl["points"]))
            if dl.get("avoid_zero", False):
                step = grid[1] - grid[0] if grid.size > 1 else r
                grid[np.abs(grid) < 1e-12 * max(r, 1.0)] = 0.5 * step
            return [float(v) for v in grid]
        if kind == "coupling_span":
            J = np.sqrt(system.mirror_rates.sum() * system.medium_rate)
            return [float(v) for v in np.linspace(dl["lo"] * J, dl["hi"] * J,
                                                  int(dl["points"]))]
        raise ConfigError([f"unknown delta grid kind {kind!r}"])
    if isinstance(dl, (int, float)):
        return [float(dl)]
    return [float(v) for v in dl]


def resolve_tau_grid(tau_spec: dict | None, system: ValidatedSystem) -> np.ndarray:
    if tau_spec is None:
        tau_spec = {"t_max_over_gamma": 50.0, "points": 600}
    if "grid" in tau_spec:
        return np.asarray(tau_spec["grid"], dtype=float)
    t_max = tau_spec["t_max_over_gamma"] / system.medium_rate
    return np.linspace(0.0, t_max, int(tau_spec.get("points", 600)))


def variant_tag(overrides: dict) -> str:
    if not overrides:
        return "base"
    return ";".join(f"{k}={overrides[k]:.6g}" if isinstance(overrides[k], float)
                    else f"{k}={overrides[k]}" for k in sorted(overrides))


def apply_variant(scenario: dict, overrides: dict) -> dict:
    """Merge variant overrides into a copy of the scenario's system/drive."""
    scn = {k: (dict(v) if isinstance(v, dict) else v) for k, v in scenario.items()}
    system = dict(scn.get("system", {}))
    drive = dict(scn.get("drive", {}))
    for key, val in overrides.items():
        if key in ("gamma", "Gamma", "d", "N"):
            system[key] = val
        elif key == "epsilon":
            drive["epsilon"] = [val]
        elif key == "delta":
            drive["delta"] = [val]
        else:
            raise ConfigError([f"unknown variant/sweep parameter {key!r}"])
    scn["system"] = system
    scn["drive"] = drive
    return scn


def _reachable_steady_state(system, drive, basis, L):
    """Steady state reachable from vacuum; falls back to propagation when the
    kernel is degenerate (decoupled dark modes of multi-atom mirrors)."""
    try:
        return steady_state(L)
    except DegenerateSteadyStateError:
        T = 50.0 / float(system.rates.min())
        return long_time_steady_oracle(system, drive, T, basis=basis)


def evaluate_variant(scenario: dict, overrides: dict) -> dict:
    """Compute every requested output for one variant; returns rows per kind."""
    scn = apply_variant(scenario, overrides)
    tag = variant_tag(overrides)
    system = build_system(scn["system"])
    outputs = scn.get("outputs", [])
    methods = scn.get("methods", ["regression"])
    max_exc = scn.get("max_excitations")
    rows: dict[str, list] = {}

    if any(k in outputs for k in ("g2_zero", "g2_tau", "oracle")):
        epsilons = resolve_epsilons(scn.get("drive", {}), system)
        deltas = resolve_deltas(scn.get("drive", {}), system)

    if "spectrum" in outputs:
        spec_cfg = scn.get("spectrum", {"gamma_min": 1e-3, "gamma_max": 8.0, "points": 200})
        grid = np.linspace(spec_cfg["gamma_min"], spec_cfg["gamma_max"],
                           int(spec_cfg["points"]))
        report = spectrum_report(system, grid)
        rows["spectrum"] = [_spectrum_row_values(r) for r in report]

    if "g2_zero" in outputs or "g2_tau" in outputs:
        kmax = max_exc
        if kmax is None:
            # weakly driven multi-atom mirrors: amplitudes beyond three
            # excitations are negligible and the full space is prohibitive
            kmax = 3 if (system.n_atoms > 3 and "regression" in methods) \
                else system.n_atoms
        basis = enumerate_basis(system.n_atoms, kmax)
        sig = emission_operator(system, basis)

    if "g2_zero" in outputs:
        out = []
        for eps in epsilons:
            for delta in deltas:
                row = [tag, eps, delta]
                if "regression" in methods:
                    drive = DriveSpec(epsilon=eps, delta=delta)
                    L = build_liouvillian(system, drive, basis)
                    rho = _reachable_steady_state(system, drive, basis, L)
                    row.append(g2_zero_regression(L, rho, sig))
                if "analytic" in methods:
                    row.append(g2_zero_analytic(system, delta))
                if "regression" in methods and "analytic" in methods:
                    row.append(abs(row[-2] - row[-1]) / max(abs(row[-1]), 1e-300))
                out.append(tuple(row))
        rows["g2_zero"] = out

    if "g2_tau" in outputs:
        taus = resolve_tau_grid(scn.get("tau"), system)
        out = []
        for eps in epsilons:
            for delta in deltas:
                drive = DriveSpec(epsilon=eps, delta=delta)
                L = build_liouvillian(system, drive, basis)
                rho = _reachable_steady_state(system, drive, basis, L)
                curve = g2_regression(L, rho, sig, taus)
                out.extend((tag, eps, delta, float(t), float(v))
                           for t, v in zip(curve.tau_grid, curve.values))
        rows["g2_tau"] = out

    if "modes" in outputs:
        ms = collective_modes(system)
        rows["modes"] = [(tag, i, m.label, m.decay.real, m.decay.imag,
                          m.coupling_to_medium) for i, m in enumerate(ms.modes)]

    if "census" in outputs:
        tec = two_excitation_census(system)
        pc = polariton_census(system)
        rows["census"] = [
            (tag, "mirror_two_excitation_bright", float(tec.n_bright)),
            (tag, "mirror_two_excitation_dark", float(tec.n_dark)),
            (tag, "mirror_two_excitation_total", float(tec.total)),
            (tag, "polariton_two_excitation_total", float(pc.total)),
            (tag, "polariton_participating", float(len(pc.participating))),
            (tag, "delta_numeric", pc.delta_numeric),
            (tag, "zeno_state_im", pc.zeno_eigenvalue.imag),
        ]

    if "zeno" in outputs:
        out = []
        for delta in resolve_deltas(scn.get("drive", {}), system):
            report = zeno_diagnostics(system, delta)
            out.extend((tag, delta, c.label, c.eigenvalue.real, c.eigenvalue.imag,
                        abs(c.raw_amplitude), c.amplitude, c.ratio)
                       for c in report.channels)
        rows["zeno"] = out

    if "oracle" in outputs:
        reports = []
        for eps in epsilons:
            for delta in deltas:
                reports.append(steady_state_cross_check(
                    system, DriveSpec(epsilon=eps, delta=delta),
                    scenario=f"{scn.get('name', 'scenario')}:{tag}"))
        if system.n_atoms == 3:
            mirror = system.mirror_rates
            d_val = -float(system.positions[0])
            reports.append(mode_reduction_check(system.medium_rate, float(mirror[0]),
                                               d=d_val))
        rows["oracle"] = [r.to_json() for r in reports]

    return rows


def _spectrum_row_values(r: SpectrumRow) -> tuple:
    vals = [r.gamma]
    for z in (*r.lam, *r.beta):
        vals.extend([z.real, z.imag])
    vals.append(r.max_dev)
    return tuple(vals)


def g2_zero_columns(methods) -> tuple:
    cols = ["variant", "epsilon", "delta"]
    if "regression" in methods:
        cols.append("g2_regression")
    if "analytic" in methods:
        cols.append("g2_analytic")
    if "regression" in methods and "analytic" in methods:
        cols.append("rel_dev")
    return tuple(cols)


def built_in_scenarios() -> dict[str, dict]:
    """Scenario definitions reproducing the headline datasets by name."""
    return {
        "fig2": {
            "name": "fig2",
            "description": "single/two-excitation eigenvalues vs gamma, numerics "
                           "against closed forms",
            "system": {"builder": "canonical", "gamma": 1.0, "Gamma": 1.0},
            "outputs": ["spectrum"],
            "spectrum": {"gamma_min": 1e-3, "gamma_max": 8.0, "points": 200},
        },
        "fig3a": {
            "name": "fig3a",
            "description": "g2(0) vs detuning for drive strengths 0.1/1/10 gamma "
                           "at gamma = 0.01",
            "system": {"builder": "canonical", "gamma": 0.01, "Gamma": 1.0},
            "drive": {
                "epsilon": {"scale": "gamma", "values": [0.1, 1.0, 10.0]},
                "delta": {"kind": "resonant_span", "span": 3.0, "points": 41},
            },
            "outputs": ["g2_zero"],
            "methods": ["regression"],
        },
        "fig3c": {
            "name": "fig3c",
            "description": "weak-drive g2(0): master equation vs resolvent formula "
                           "for gamma = 0.01, 0.1, 1",
            "system": {"builder": "canonical", "gamma": 0.01, "Gamma": 1.0},
            "variants": [{"gamma": 0.01}, {"gamma": 0.1}, {"gamma": 1.0}],
            "drive": {
                "epsilon": {"scale": "gamma", "values": [1e-3]},
                "delta": {"kind": "resonant_span", "span": 3.0, "points": 41,
                          "avoid_zero": True},
            },
            "outputs": ["g2_zero"],
            "methods": ["regression", "analytic"],
        },
        "fig3d": {
            "name": "fig3d",
            "description": "g2(tau) at the polariton resonance for gamma = "
                           "0.01/0.02 and medium offsets d = 1/4, 1/10",
            "system": {"builder": "canonical", "gamma": 0.01, "Gamma": 1.0},
            "variants": [{"gamma": 0.01, "d": 0.25}, {"gamma": 0.02, "d": 0.25},
                         {"gamma": 0.01, "d": 0.10}, {"gamma": 0.02, "d": 0.10}],
            "drive": {
                "epsilon": {"scale": "gamma", "values": [1e-3]},
                "delta": {"kind": "resonant", "signs": [-1]},
            },
            "tau": {"t_max_over_gamma": 50.0, "points": 600},
            "outputs": ["g2_tau"],
            "methods": ["regression"],
        },
        "natom": {
            "name": "natom",
            "description": "N-atom mirrors: collective modes, state censuses, and "
                           "the weak-drive g2(0) dip vs N",
            "system": {"builder": "n_atom", "N": 1, "gamma": 0.01, "Gamma": 1.0},
            "variants": [{"N": 1}, {"N": 2}, {"N": 3}],
            "drive": {
                "epsilon": {"scale": "gamma", "values": [1e-3]},
                "delta": {"kind": "coupling_span", "lo": 0.6, "hi": 1.4, "points": 81},
            },
            "outputs": ["modes", "census", "g2_zero"],
            "methods": ["analytic"],
        },
        "zeno": {
            "name": "zeno",
            "description": "two-excitation feeding amplitudes and suppression "
                           "ratios at the polariton resonance",
            "system": {"builder": "canonical", "gamma": 0.01, "Gamma": 1.0},
            "drive": {"delta": {"kind": "resonant", "signs": [-1]}},
            "outputs": ["zeno"],
        },
        "oracle": {
            "name": "oracle",
            "description": "steady-state and mode-basis cross-checks for the "
                           "figure operating points",
            "system": {"builder": "canonical", "gamma": 0.01, "Gamma": 1.0},
            "variants": [{"gamma": 0.01}, {"gamma": 0.1}, {"gamma": 1.0}],
            "drive": {
                "epsilon": {"scale": "gamma", "values": [0.1]},
                "delta": {"kind": "resonant", "signs": [-1]},
            },
            "outputs": ["oracle"],
        },
    }
