"""Command-line front end.

Subcommands evaluate the closed forms on user-supplied parameters, emit
sweep datasets as CSV or JSON, and run the brute-force verification suite.

Exit codes: 0 success, 1 usage error, 2 numerical-precondition failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import entanglement, fock, polarization, states, stokes

USAGE_ERROR = 1
NUMERICAL_ERROR = 2
VERIFY_ERROR = 3

_EQ_TAGS = {
    "stokes-coherent": "7,8,9",
    "stokes-superposition": "22,23,24,25,26,27",
    "stokes-named": "32,33,34",
    "qfunc-coherent": "17,18",
    "qfunc-superposition": "28,29,30,31",
    "qfunc-psi1": "35",
    "qfunc-psi2": "36",
    "qfunc-psi3": "37",
    "dop": "15,16",
    "dop-analytic": "19",
    "concurrence-general": "38",
    "concurrence-named": "39",
    "concurrence-crc": "41",
    "amplitude": "20,21",
}


class UsageError(ValueError):
    """Bad flags or state specification."""


class UnsupportedState(UsageError):
    """A subcommand received a state family it does not handle."""


@dataclass
class RunConfig:
    cutoff: int | None
    theta_nodes: int | None
    phi_nodes: int | None
    tolerance: float
    output_format: str
    output_path: str | None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        theta_nodes = getattr(args, "theta_nodes", None)
        phi_nodes = getattr(args, "phi_nodes", None)
        tolerance = getattr(args, "tol", None)
        if theta_nodes is not None and theta_nodes < 8:
            raise UsageError("--theta-nodes must be at least 8")
        if phi_nodes is not None and phi_nodes < 16:
            raise UsageError("--phi-nodes must be at least 16")
        if tolerance is not None and not 0.0 < tolerance <= 1e-2:
            raise UsageError("--tol must lie in (0, 1e-2]")
        return cls(
            cutoff=getattr(args, "cutoff", None),
            theta_nodes=theta_nodes,
            phi_nodes=phi_nodes,
            tolerance=1e-8 if tolerance is None else tolerance,
            output_format=getattr(args, "format", "csv"),
            output_path=getattr(args, "output", None),
        )

    def grid_for(self, max_power: float) -> polarization.SphereGrid:
        """Explicit node counts win; otherwise scale with optical power."""
        if self.theta_nodes is not None or self.phi_nodes is not None:
            n_theta = self.theta_nodes or 64
            n_phi = self.phi_nodes or 2 * n_theta
            return polarization.SphereGrid.build(n_theta, n_phi)
        return polarization.SphereGrid.for_power(max_power)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_table(meta, header, rows, config: RunConfig, footer=()):
    """Emit one table deterministically as CSV or JSON."""
    if config.output_format == "json":
        payload = {"meta": dict(meta), "rows": [list(map(float, row)) for row in rows]}
        payload["meta"]["columns"] = list(header)
        for key, value in footer:
            payload["meta"][key] = value
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"# {key}={value}" for key, value in meta.items()]
        lines.append(",".join(header))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        lines.extend(f"# {key}={value}" for key, value in footer)
        text = "\n".join(lines) + "\n"
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def parse_coherent(text: str) -> states.TwoModeCoherent:
    """Two reals -> real labels (alpha, beta); four -> complex labels."""
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --coherent value {text!r}: {exc}") from None
    if len(parts) == 2:
        return states.TwoModeCoherent(complex(parts[0]), complex(parts[1]))
    if len(parts) == 4:
        return states.TwoModeCoherent(
            complex(parts[0], parts[1]), complex(parts[2], parts[3])
        )
    raise UsageError("--coherent takes RE,IM of each mode or two real labels")


def parse_range(text: str) -> np.ndarray:
    """Inclusive lo:hi:step sweep values."""
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None
    if step <= 0.0 or hi < lo:
        raise UsageError(f"range {text!r} must satisfy lo <= hi, step > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _state_meta(args) -> dict:
    """Flag values worth echoing into output metadata, in a fixed order."""
    meta = {}
    for key in ("coherent", "named", "alpha2", "beta2", "alpha2_range", "beta2_range"):
        value = getattr(args, key, None)
        if value is not None:
            meta[key.replace("_", "-")] = value
    return meta


def _named_state(kind: str, alpha2: float, beta2: float | None) -> states.NamedState:
    if alpha2 < 0.0 or (beta2 is not None and beta2 < 0.0):
        raise UsageError("--alpha2/--beta2 are mean photon numbers and must be >= 0")
    alpha = math.sqrt(alpha2)
    if kind == "psi1":
        if beta2 is None:
            raise UsageError("psi1 needs --beta2 (or --beta2-range)")
        return states.psi1(alpha, math.sqrt(beta2))
    if kind == "psi2":
        return states.psi2(alpha)
    if kind == "psi3":
        return states.psi3(alpha)
    raise UsageError(f"unknown named state {kind!r}")


def _moment_columns(moments: stokes.StokesMoments) -> list[float]:
    return [
        moments.mean0,
        moments.mean1,
        moments.mean2,
        moments.mean3,
        moments.second1,
        moments.second2,
        moments.second3,
        moments.var1,
        moments.var2,
        moments.var3,
    ]


_MOMENT_HEADER = [
    "mean0",
    "mean1",
    "mean2",
    "mean3",
    "second1",
    "second2",
    "second3",
    "var1",
    "var2",
    "var3",
]


def cmd_stokes(args) -> int:
    config = RunConfig.from_args(args)
    oracle = bool(args.oracle)
    variant = args.variant
    meta = {"command": "stokes", "variant": variant}
    meta.update(_state_meta(args))
    header: list[str]
    rows = []
    if args.coherent:
        state = parse_coherent(args.coherent)
        meta["eq"] = _EQ_TAGS["stokes-coherent"]
        header = ["alpha_re", "alpha_im", "beta_re", "beta_im", *_MOMENT_HEADER]
        row = [
            state.alpha.real,
            state.alpha.imag,
            state.beta.real,
            state.beta.imag,
            *_moment_columns(stokes.stokes_coherent(state)),
        ]
        if oracle:
            om = fock.oracle_stokes(fock.encode_coherent(state, config.cutoff))
            row += _moment_columns(om)
            row += [abs(a - b) for a, b in zip(row[4:14], _moment_columns(om))]
        rows.append(row)
    elif args.named:
        meta["eq"] = _EQ_TAGS["stokes-named"]
        alpha2s = parse_range(args.alpha2_range) if args.alpha2_range else [args.alpha2]
        if alpha2s[0] is None:
            raise UsageError("stokes --named needs --alpha2 or --alpha2-range")
        beta2 = args.beta2
        header = ["alpha2"] + (["beta2"] if args.named == "psi1" else []) + _MOMENT_HEADER
        for alpha2 in alpha2s:
            named = _named_state(args.named, float(alpha2), beta2)
            row = [float(alpha2)] + ([beta2] if args.named == "psi1" else [])
            row += _moment_columns(stokes.stokes_named(named, variant=variant))
            if oracle:
                cat = states.make_named_state(named)
                om = fock.oracle_stokes(fock.encode_superposition(cat, config.cutoff))
                base = len(row) - 10
                row += _moment_columns(om)
                row += [abs(row[base + i] - _moment_columns(om)[i]) for i in range(10)]
            rows.append(row)
    else:
        raise UsageError("stokes needs --coherent or --named")
    if oracle:
        header = header + [f"oracle_{h}" for h in _MOMENT_HEADER] + [
            f"delta_{h}" for h in _MOMENT_HEADER
        ]
    write_table(meta, header, rows, config)
    return 0


def _qfunc_sampler(args, config: RunConfig):
    variant = args.variant
    if args.coherent:
        state = parse_coherent(args.coherent)
        return (
            polarization.coherent_sampler(state),
            state.mean_photons,
            _EQ_TAGS["qfunc-coherent"],
            state,
            None,
        )
    if args.named:
        named = _named_state(args.named, args.alpha2, args.beta2)
        cat = states.make_named_state(named)
        power = max(cat.term_a.mean_photons, cat.term_b.mean_photons)
        return (
            polarization.named_sampler(named, variant=variant),
            power,
            _EQ_TAGS[f"qfunc-{args.named}"],
            None,
            cat,
        )
    raise UsageError("qfunc needs --coherent or --named")


def cmd_qfunc(args) -> int:
    config = RunConfig.from_args(args)
    if args.named and args.alpha2 is None:
        raise UsageError("qfunc --named needs --alpha2")
    sampler, power, eq, coherent_state, cat = _qfunc_sampler(args, config)
    grid = config.grid_for(power)
    theta_col, phi_row = grid.mesh()
    values = grid.sample(sampler)
    meta = {
        "command": "qfunc",
        "eq": eq,
        "variant": args.variant,
        "theta_nodes": grid.theta.size,
        "phi_nodes": grid.n_phi,
    }
    meta.update(_state_meta(args))
    header = ["theta", "phi", "q", "x", "y", "z"]
    oracle_vals = None
    if args.oracle:
        if coherent_state is not None:
            vec = fock.encode_coherent(coherent_state, config.cutoff)
        else:
            vec = fock.encode_superposition(cat, config.cutoff)
        oracle_vals = fock.q_fock(vec, theta_col, phi_row)
        header += ["oracle_q", "delta_q"]
    rows = []
    sin_theta = np.sin(grid.theta)
    cos_theta = np.cos(grid.theta)
    phis = grid.phi
    for i, theta in enumerate(grid.theta):
        for j, phi in enumerate(phis):
            q = values[i, j]
            row = [
                theta,
                phi,
                q,
                q * sin_theta[i] * math.cos(phi),
                q * sin_theta[i] * math.sin(phi),
                q * cos_theta[i],
            ]
            if oracle_vals is not None:
                row += [oracle_vals[i, j], abs(q - oracle_vals[i, j])]
            rows.append(row)
    write_table(meta, header, rows, config)
    return 0


def _dop_of(sampler, grid) -> polarization.DegreeOfPolarization:
    return polarization.degree_of_polarization(sampler, grid)


def cmd_dop(args) -> int:
    config = RunConfig.from_args(args)
    meta = {"command": "dop", "eq": _EQ_TAGS["dop"]}
    meta.update(_state_meta(args))
    rows = []
    if args.coherent_sweep:
        if not args.alpha2_range:
            raise UsageError("--coherent-sweep needs --alpha2-range")
        sweep = parse_range(args.alpha2_range)
        family = args.coherent_sweep
        meta["family"] = family

        def build(alpha2: float) -> states.TwoModeCoherent:
            amp = math.sqrt(alpha2)
            if family == "hv":
                return states.TwoModeCoherent(complex(amp), 0j)
            return states.TwoModeCoherent(complex(amp), complex(amp))

        max_power = max(build(float(a)).mean_photons for a in sweep)
        grid = config.grid_for(max_power)

        def one(alpha2: float) -> list[float]:
            dop = _dop_of(polarization.coherent_sampler(build(alpha2)), grid)
            return [alpha2, dop.distance, dop.degree]

        with ThreadPoolExecutor() as pool:
            rows = list(pool.map(one, map(float, sweep)))
        header = ["alpha2", "distance", "degree"]
    elif args.coherent:
        state = parse_coherent(args.coherent)
        grid = config.grid_for(state.mean_photons)
        dop = _dop_of(polarization.coherent_sampler(state), grid)
        header = ["alpha_re", "alpha_im", "beta_re", "beta_im", "distance", "degree"]
        rows = [
            [
                state.alpha.real,
                state.alpha.imag,
                state.beta.real,
                state.beta.imag,
                dop.distance,
                dop.degree,
            ]
        ]
    elif args.named:
        sweep = parse_range(args.alpha2_range) if args.alpha2_range else [args.alpha2]
        if sweep[0] is None:
            raise UsageError("dop --named needs --alpha2 or --alpha2-range")
        named_all = [_named_state(args.named, float(a), args.beta2) for a in sweep]
        cats = [states.make_named_state(n) for n in named_all]
        max_power = max(
            max(c.term_a.mean_photons, c.term_b.mean_photons) for c in cats
        )
        grid = config.grid_for(max_power)

        def one(pair) -> list[float]:
            alpha2, named = pair
            dop = _dop_of(polarization.named_sampler(named, variant=args.variant), grid)
            return [alpha2, dop.distance, dop.degree]

        with ThreadPoolExecutor() as pool:
            rows = list(pool.map(one, zip(map(float, sweep), named_all)))
        header = ["alpha2", "distance", "degree"]
    else:
        raise UsageError("dop needs --coherent, --coherent-sweep, or --named")
    write_table(meta, header, rows, config)
    return 0


def cmd_concurrence(args) -> int:
    config = RunConfig.from_args(args)
    rows = []
    if args.crc:
        if args.dist2 is None or not args.theta_range:
            raise UsageError("--crc needs --dist2 and --theta-range")
        meta = {
            "command": "concurrence",
            "eq": _EQ_TAGS["concurrence-crc"],
            "dist2": args.dist2,
            "phi1": args.phi1 or "0",
            "theta-range": args.theta_range,
        }
        alpha = math.sqrt(args.dist2)
        phi1_values = [float(p) for p in args.phi1.split(",")] if args.phi1 else [0.0]
        thetas = parse_range(args.theta_range)
        header = ["phi1", "theta", "concurrence"]
        for phi1 in phi1_values:
            for theta in thetas:
                row = [phi1, float(theta), entanglement.concurrence_after_crc(alpha, 0.0, float(theta), phi1)]
                if args.oracle:
                    cat = states.crc_transform(
                        states.TwoModeCoherent(complex(alpha), 0j),
                        states.TwoModeCoherent(0j, complex(alpha)),
                        states.CrcParams(phi1, float(theta), 0.0),
                    )
                    oracle = fock.purity_concurrence(
                        fock.encode_superposition(cat, config.cutoff)
                    )
                    row += [oracle, abs(row[2] - oracle)]
                rows.append(row)
    elif args.named:
        meta = {"command": "concurrence", "eq": _EQ_TAGS["concurrence-named"]}
        meta.update(_state_meta(args))
        alpha2s = parse_range(args.alpha2_range) if args.alpha2_range else [args.alpha2]
        if alpha2s[0] is None:
            raise UsageError("concurrence --named needs --alpha2 or --alpha2-range")
        if args.named == "psi1":
            beta2s = parse_range(args.beta2_range) if args.beta2_range else [args.beta2]
            if beta2s[0] is None:
                raise UsageError("concurrence --named psi1 needs --beta2 or --beta2-range")
            header = ["alpha2", "beta2", "concurrence"]
            for alpha2 in alpha2s:
                for beta2 in beta2s:
                    named = _named_state("psi1", float(alpha2), float(beta2))
                    row = [float(alpha2), float(beta2), entanglement.concurrence_named(named)]
                    if args.oracle:
                        vec = fock.encode_superposition(
                            states.make_named_state(named), config.cutoff
                        )
                        oracle = fock.purity_concurrence(vec)
                        row += [oracle, abs(row[2] - oracle)]
                    rows.append(row)
        else:
            header = ["alpha2", "concurrence"]
            for alpha2 in alpha2s:
                named = _named_state(args.named, float(alpha2), None)
                row = [float(alpha2), entanglement.concurrence_named(named)]
                if args.oracle:
                    vec = fock.encode_superposition(
                        states.make_named_state(named), config.cutoff
                    )
                    oracle = fock.purity_concurrence(vec)
                    row += [oracle, abs(row[1] - oracle)]
                rows.append(row)
    else:
        raise UsageError("concurrence needs --named or --crc")
    if args.oracle:
        header = header + ["oracle_concurrence", "delta_concurrence"]
    write_table(meta, header, rows, RunConfig.from_args(args))
    return 0


def cmd_amplitude(args) -> int:
    config = RunConfig.from_args(args)
    if args.named:
        raise UnsupportedState(
            "amplitude handles product coherent states only; superposition "
            "amplitude densities are available through the number-basis reference"
        )
    if not args.coherent:
        raise UsageError("amplitude needs --coherent")
    state = parse_coherent(args.coherent)
    xs = parse_range(args.x_range)
    ys = parse_range(args.y_range)
    mean_x, mean_y = polarization.amplitude_means(state)
    meta = {
        "command": "amplitude",
        "eq": _EQ_TAGS["amplitude"],
        "coherent": args.coherent,
        "x-range": args.x_range,
        "y-range": args.y_range,
    }
    header = ["x", "y", "density"]
    rows = [
        [float(x), float(y), polarization.amplitude_density(state, float(x), float(y))]
        for x in xs
        for y in ys
    ]
    footer = [("mean_x", _fmt(mean_x)), ("mean_y", _fmt(mean_y))]
    write_table(meta, header, rows, config, footer=footer)
    return 0


def _random_cats(count: int, radius: float, seed: int):
    rng = np.random.default_rng(seed)

    def label() -> complex:
        magnitude = radius * math.sqrt(rng.uniform())
        angle = rng.uniform(0.0, 2.0 * math.pi)
        return magnitude * complex(math.cos(angle), math.sin(angle))

    cats = []
    for _ in range(count):
        cats.append(
            states.CatSuperposition.from_terms(
                states.TwoModeCoherent(label(), label()),
                states.TwoModeCoherent(label(), label()),
            )
        )
    return cats


_MOMENT_FIELDS = ("mean0", "mean1", "mean2", "mean3", "second1", "second2", "second3")


def _suite_tol(args, default: float) -> float:
    explicit = getattr(args, "tol", None)
    return default if explicit is None else explicit


def _verify_stokes(args, report):
    cats = _random_cats(args.states, 2.5, args.seed)
    cutoff = fock.default_cutoff(2.5**2)
    worst = 0.0
    for cat in cats:
        closed = stokes.stokes_superposition(cat)
        oracle = fock.oracle_stokes(fock.encode_superposition(cat, cutoff))
        for field in _MOMENT_FIELDS:
            worst = max(worst, abs(getattr(closed, field) - getattr(oracle, field)))
    return report(
        "stokes",
        worst <= _suite_tol(args, 1e-9),
        f"max |delta| = {worst:.3e} over {len(cats)} states",
    )


def _verify_concurrence(args, report):
    cats = _random_cats(args.states, 2.5, args.seed + 1)
    cutoff = fock.default_cutoff(2.5**2)
    worst = max(
        abs(
            entanglement.concurrence_general(cat)
            - fock.purity_concurrence(fock.encode_superposition(cat, cutoff))
        )
        for cat in cats
    )
    named_worst = 0.0
    for alpha2 in np.linspace(0.04, 4.0, 8):
        for named in (
            states.psi1(math.sqrt(alpha2), 0.5),
            states.psi2(math.sqrt(alpha2)),
            states.psi3(math.sqrt(alpha2)),
        ):
            named_worst = max(
                named_worst,
                abs(
                    entanglement.concurrence_named(named)
                    - entanglement.concurrence_general(states.make_named_state(named))
                ),
            )
    ok = worst <= _suite_tol(args, 1e-8) and named_worst <= 1e-12
    return report(
        "concurrence",
        ok,
        f"oracle max |delta| = {worst:.3e}; named-vs-general max = {named_worst:.3e}",
    )


def _verify_named_consistency(args, report):
    worst = 0.0
    for alpha2 in (0.25, 1.0, 2.0, 4.0):
        for named in (
            states.psi1(math.sqrt(alpha2), 1.3),
            states.psi2(math.sqrt(alpha2)),
            states.psi3(math.sqrt(alpha2)),
        ):
            direct = stokes.stokes_named(named)
            general = stokes.stokes_superposition(states.make_named_state(named))
            for field in ("mean0", "mean1", "mean2", "mean3", "var1", "var2", "var3"):
                worst = max(worst, abs(getattr(direct, field) - getattr(general, field)))
    return report("named-consistency", worst <= 1e-10, f"max |delta| = {worst:.3e}")


def _verify_disentangler(args, report):
    worst_formula = 0.0
    worst_oracle = 0.0
    for dist2 in (1.0, 4.0, 9.0):
        alpha = math.sqrt(dist2)
        worst_formula = max(
            worst_formula, entanglement.concurrence_after_crc(alpha, 0.0, math.pi / 4, 0.0)
        )
        cat = states.crc_transform(
            states.TwoModeCoherent(complex(alpha), 0j),
            states.TwoModeCoherent(0j, complex(alpha)),
            states.CrcParams(0.0, math.pi / 4, 0.0),
        )
        worst_oracle = max(
            worst_oracle, fock.purity_concurrence(fock.encode_superposition(cat))
        )
    ok = worst_formula <= 1e-12 and worst_oracle <= 1e-9
    return report(
        "disentangler",
        ok,
        f"closed form max = {worst_formula:.3e}; reference max = {worst_oracle:.3e}",
    )


def _verify_q_normalization(args, report):
    grid = polarization.SphereGrid.build()
    samplers = [
        polarization.coherent_sampler(states.TwoModeCoherent(2, 0)),
        polarization.coherent_sampler(states.TwoModeCoherent(2, 2j)),
        polarization.superposition_sampler(
            states.CatSuperposition.from_terms(
                states.TwoModeCoherent(1.2 + 0.3j, -0.4j),
                states.TwoModeCoherent(-0.8, 1.1 + 0.2j),
            )
        ),
        polarization.named_sampler(states.psi1(1.0, 2.0)),
        polarization.named_sampler(states.psi1(1.0, 2.0), variant="tabulated"),
        polarization.named_sampler(states.psi2(2.0)),
        polarization.named_sampler(states.psi3(2.0)),
        polarization.fock_sampler(fock.encode_coherent(states.TwoModeCoherent(2, 2))),
        polarization.constant_sampler(),
    ]
    worst = max(abs(grid.integrate(grid.sample(q)) - 1.0) for q in samplers)
    return report(
        "q-normalization", worst <= 1e-8, f"max |integral - 1| = {worst:.3e} over {len(samplers)} samplers"
    )


def _verify_q_pointwise(args, report):
    theta = np.linspace(0.07, math.pi - 0.07, 12)[:, None]
    phi = np.linspace(0.0, 2.0 * math.pi, 12, endpoint=False)[None, :]
    worst = 0.0
    coherent = states.TwoModeCoherent(2, 0)
    worst = max(
        worst,
        float(
            np.abs(
                polarization.q_coherent(coherent, theta, phi)
                - fock.q_fock(fock.encode_coherent(coherent), theta, phi)
            ).max()
        ),
    )
    cat = states.CatSuperposition.from_terms(
        states.TwoModeCoherent(1.1 + 0.4j, -0.6 + 0.9j),
        states.TwoModeCoherent(-0.5 + 1.0j, 0.7 - 0.2j),
    )
    worst = max(
        worst,
        float(
            np.abs(
                polarization.q_superposition(cat, theta, phi)
                - fock.q_fock(fock.encode_superposition(cat), theta, phi)
            ).max()
        ),
    )
    for named in (states.psi1(1.0, 2.0), states.psi2(1.5), states.psi3(2.0)):
        vec = fock.encode_superposition(states.make_named_state(named))
        worst = max(
            worst,
            float(
                np.abs(
                    polarization.q_named(named, theta, phi) - fock.q_fock(vec, theta, phi)
                ).max()
            ),
        )
    return report("q-pointwise", worst <= _suite_tol(args, 1e-9), f"max |delta| = {worst:.3e}")


def _verify_rotation_map(args, report):
    from scipy.linalg import expm

    cutoff = 25
    state = states.TwoModeCoherent(1, 1)
    theta = math.pi / 2
    start = fock.encode_coherent(state, cutoff)
    s3 = np.asarray(fock.stokes_matrices(cutoff)[3])
    mapped = fock.encode_coherent(states.rotate(state, theta), cutoff)
    full = fock.FockVector(
        cutoff,
        (expm(1j * theta * s3) @ start.amplitudes.reshape(-1)).reshape(cutoff + 1, -1),
    )
    half = fock.FockVector(
        cutoff,
        (expm(0.5j * theta * s3) @ start.amplitudes.reshape(-1)).reshape(cutoff + 1, -1),
    )
    fid_full = fock.state_fidelity(mapped, full)
    fid_half = fock.state_fidelity(mapped, half)
    ok = fid_full >= 1.0 - 1e-9
    return report(
        "rotation-map",
        ok,
        f"exp(i theta S3) fidelity = {fid_full:.12f}; half-angle variant = {fid_half:.6f}",
    )


def _verify_commutators(args, report):
    cutoff = args.cutoff or 16
    s0, s1, s2, s3 = (np.asarray(m) for m in fock.stokes_matrices(cutoff))
    counts = np.arange(cutoff + 1)
    safe = ((counts[:, None] + counts[None, :]) <= cutoff - 2).reshape(-1)
    worst = 0.0
    for left, right, expect in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
        residual = left @ right - right @ left - 2j * expect
        worst = max(worst, float(np.abs(residual[np.ix_(safe, safe)]).max()))
    for op in (s1, s2, s3):
        residual = s0 @ op - op @ s0
        worst = max(worst, float(np.abs(residual[np.ix_(safe, safe)]).max()))
    return report("commutators", worst <= 1e-10, f"cutoff {cutoff}; max |residual| = {worst:.3e}")


def _verify_unpolarized(args, report):
    cutoff = 24
    distributions = {
        "vacuum": [1.0],
        "poisson-2": [math.exp(-2.0) * 2.0**n / math.factorial(n) for n in range(cutoff + 1)],
        "uniform-0-5": [1.0 / 6.0] * 6,
    }
    grid = polarization.SphereGrid.build()
    worst_comm = 0.0
    worst_const = 0.0
    worst_degree = 0.0
    s1 = np.asarray(fock.stokes_matrices(cutoff)[1])
    s3 = np.asarray(fock.stokes_matrices(cutoff)[3])
    for probabilities in distributions.values():
        dens = fock.unpolarized_fixture(probabilities, cutoff)
        for op in (s1, s3):
            worst_comm = max(
                worst_comm, float(np.linalg.norm(dens.matrix @ op - op @ dens.matrix))
            )
        values = grid.sample(polarization.unpolarized_sampler(dens))
        worst_const = max(worst_const, float(np.abs(values - polarization.UNPOLARIZED_Q).max()))
        dop = polarization.degree_of_polarization(polarization.unpolarized_sampler(dens), grid)
        worst_degree = max(worst_degree, dop.degree)
    ok = worst_comm <= 1e-10 and worst_const <= 1e-10 and worst_degree < 1e-6
    return report(
        "unpolarized",
        ok,
        f"commutator norm = {worst_comm:.3e}; |Q - 1/4pi| = {worst_const:.3e}; degree = {worst_degree:.3e}",
    )


def _verify_amplitude_means(args, report):
    rng = np.random.default_rng(args.seed + 2)
    worst = 0.0
    for _ in range(20):
        state = states.TwoModeCoherent(
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
        )
        closed = polarization.amplitude_means(state)
        oracle = fock.oracle_amplitude_means(fock.encode_coherent(state))
        worst = max(worst, abs(closed[0] - oracle[0]), abs(closed[1] - oracle[1]))
    return report("amplitude-means", worst <= 1e-9, f"max |delta| = {worst:.3e}")


def _verify_arbitration(args, report):
    lines = []
    all_ok = True
    quantities = {
        "psi1 mean2": ("mean2", True),
        "psi1 V1": ("var1", True),
        "psi1 V2": ("var2", True),
        "psi1 V3": ("var3", False),
        "psi2 mean2": ("mean2", False),
        "psi2 V1": ("var1", True),
        "psi2 V2": ("var2", False),
        "psi2 V3": ("var3", True),
        "psi3 V1": ("var1", True),
        "psi3 V2": ("var2", True),
        "psi3 V3": ("var3", True),
    }
    points = [
        states.psi1(1.0, 2.0),
        states.psi1(0.5, 1.5),
        states.psi2(0.8),
        states.psi2(1.4),
        states.psi3(1.0),
        states.psi3(1.8),
    ]
    oracle_cache = {
        id(named): fock.oracle_stokes(
            fock.encode_superposition(states.make_named_state(named))
        )
        for named in points
    }
    for label, (field, tabulated_consistent) in quantities.items():
        family = label.split()[0]
        selected = [n for n in points if n.kind.value == family]
        delta_corr = max(
            abs(getattr(stokes.stokes_named(n), field) - getattr(oracle_cache[id(n)], field))
            for n in selected
        )
        delta_tab = max(
            abs(
                getattr(stokes.stokes_named(n, variant="tabulated"), field)
                - getattr(oracle_cache[id(n)], field)
            )
            for n in selected
        )
        verdict = "consistent" if delta_tab <= 1e-9 else "inconsistent"
        lines.append(
            f"  {label}: corrected |delta| = {delta_corr:.2e}; "
            f"tabulated |delta| = {delta_tab:.2e} ({verdict})"
        )
        if delta_corr > 1e-9:
            all_ok = False
        if tabulated_consistent != (delta_tab <= 1e-9):
            all_ok = False
    theta = np.linspace(0.07, math.pi - 0.07, 10)[:, None]
    phi = np.linspace(0.0, 2.0 * math.pi, 10, endpoint=False)[None, :]
    named = states.psi1(1.0, 2.0)
    reference = fock.q_fock(
        fock.encode_superposition(states.make_named_state(named)), theta, phi
    )
    q_corr = float(np.abs(polarization.q_named(named, theta, phi) - reference).max())
    q_tab = float(
        np.abs(polarization.q_named(named, theta, phi, variant="tabulated") - reference).max()
    )
    lines.append(
        f"  psi1 Q interference: corrected |delta| = {q_corr:.2e}; "
        f"tabulated |delta| = {q_tab:.2e} (inconsistent away from alpha == beta)"
    )
    if q_corr > 1e-9 or q_tab <= 1e-9:
        all_ok = False
    detail = "tabulated closed-form entries checked against the reference\n" + "\n".join(lines)
    return report("arbitration", all_ok, detail)


_VERIFY_SUITES = {
    "stokes": _verify_stokes,
    "concurrence": _verify_concurrence,
    "named-consistency": _verify_named_consistency,
    "disentangler": _verify_disentangler,
    "q-normalization": _verify_q_normalization,
    "q-pointwise": _verify_q_pointwise,
    "rotation-map": _verify_rotation_map,
    "commutators": _verify_commutators,
    "unpolarized": _verify_unpolarized,
    "amplitude-means": _verify_amplitude_means,
    "arbitration": _verify_arbitration,
}


def cmd_verify(args) -> int:
    RunConfig.from_args(args)
    selected = _VERIFY_SUITES
    if args.only:
        if args.only not in _VERIFY_SUITES:
            raise UsageError(
                f"unknown suite {args.only!r}; choose from {', '.join(_VERIFY_SUITES)}"
            )
        selected = {args.only: _VERIFY_SUITES[args.only]}
    failures = 0

    def report(name: str, ok: bool, detail: str) -> bool:
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name}: {detail}")
        return ok

    for name, suite in selected.items():
        if not suite(args, report):
            failures += 1
    if failures:
        print(f"{failures} suite(s) failed")
        return VERIFY_ERROR
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--cutoff", type=int, help="per-mode photon-number cutoff override")
    parser.add_argument("--theta-nodes", type=int, help="polar quadrature nodes (>= 8)")
    parser.add_argument("--phi-nodes", type=int, help="azimuthal quadrature nodes (>= 16)")
    parser.add_argument("--oracle", action="store_true", help="attach reference columns")
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="override the verification tolerance (default: per-suite values)",
    )


def _add_state_spec(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--coherent", help="RE,IM per mode (4 values) or two real labels")
    parser.add_argument("--named", choices=("psi1", "psi2", "psi3"))
    parser.add_argument("--alpha2", type=float, help="mean photon number |alpha|^2")
    parser.add_argument("--beta2", type=float, help="mean photon number |beta|^2 (psi1)")
    parser.add_argument("--alpha2-range", help="sweep lo:hi:step over |alpha|^2")
    parser.add_argument("--beta2-range", help="sweep lo:hi:step over |beta|^2 (psi1)")
    parser.add_argument(
        "--variant",
        choices=stokes.VARIANTS,
        default="corrected",
        help="closed-form table variant for named states",
    )


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catpol", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_stokes = sub.add_parser("stokes", help="Stokes moments of one state or a sweep")
    _add_state_spec(p_stokes)
    _add_common(p_stokes)
    p_stokes.set_defaults(func=cmd_stokes)

    p_qfunc = sub.add_parser("qfunc", help="Q surface over the polarization sphere")
    _add_state_spec(p_qfunc)
    _add_common(p_qfunc)
    p_qfunc.set_defaults(func=cmd_qfunc)

    p_dop = sub.add_parser("dop", help="degree of polarization (single state or sweep)")
    _add_state_spec(p_dop)
    p_dop.add_argument(
        "--coherent-sweep",
        choices=("hv", "diag"),
        help="coherent family sweep: single-mode (hv) or equal diagonal (diag)",
    )
    _add_common(p_dop)
    p_dop.set_defaults(func=cmd_dop)

    p_conc = sub.add_parser("concurrence", help="concurrence values and sweeps")
    _add_state_spec(p_conc)
    p_conc.add_argument("--crc", action="store_true", help="post-device concurrence sweep")
    p_conc.add_argument("--dist2", type=float, help="|alpha - beta|^2 for --crc")
    p_conc.add_argument("--phi1", help="comma-separated compensator angles for --crc")
    p_conc.add_argument("--theta-range", help="rotator sweep lo:hi:step for --crc")
    _add_common(p_conc)
    p_conc.set_defaults(func=cmd_concurrence)

    p_amp = sub.add_parser("amplitude", help="position-amplitude density grid")
    _add_state_spec(p_amp)
    p_amp.add_argument("--x-range", default="-5:5:0.1", help="x grid lo:hi:step")
    p_amp.add_argument("--y-range", default="-5:5:0.1", help="y grid lo:hi:step")
    _add_common(p_amp)
    p_amp.set_defaults(func=cmd_amplitude)

    p_verify = sub.add_parser("verify", help="run the closed-form vs reference suites")
    p_verify.add_argument("--only", help="run a single suite by name")
    p_verify.add_argument("--states", type=int, default=50, help="random states per suite")
    p_verify.add_argument("--seed", type=int, default=7, help="random seed")
    _add_common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (fock.CutoffTooSmall, polarization.UnnormalizedSampler) as exc:
        print(f"numerical precondition failed: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
