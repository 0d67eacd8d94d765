"""Command-line front end.

Subcommand style, one binary::

    gaussbench run --generator tmsv --r 0.5 --scheme both --detector ideal
    gaussbench scheme2 --state state.json --out report.json
    gaussbench sweep --param r --start 0 --stop 2 --steps 21 --out table.csv
    gaussbench validate --state state.json
    gaussbench replay --report report.json

``oracle``, ``scheme1`` and ``scheme2`` are shorthands for ``run`` with the
scheme pinned.  Options may also come from a JSON config file (--config);
explicit flags win.  Exit codes: 0 success, 1 configuration error,
2 physics or reconstruction failure.

Reports are deterministic: no timestamps, keys sorted, all randomness
derived from the single --seed value, so identical invocations produce
byte-identical output.  Each scheme section embeds its measurement
transcript; ``replay`` re-runs the reconstruction from that transcript and
verifies it reproduces the reported invariants exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .bench import DetectorModel
from .entanglement import EntanglementReport, entanglement_report
from .errors import ConfigError, GaussBenchError
from .generators import (
    random_state,
    thermal_state,
    tmsv_state,
    two_mode_squeezed_thermal,
    vacuum_state,
)
from .schemes import (
    SchemeResult,
    TranscriptRecord,
    consistency_check,
    reconstruct_from_transcript,
    scheme1,
    scheme2,
)
from .states import (
    InvariantSet,
    ModeCovariance,
    QuadCovariance,
    invariants_quad,
    mode_to_quad,
    quad_to_mode,
    validate_physical,
)
from .stateio import load_state

__all__ = ["main", "build_parser"]

_GENERATORS = ("vacuum", "tmsv", "thermal", "tmst", "random")
_SCHEMES = ("oracle", "scheme1", "scheme2", "both")
_DETECTORS = ("ideal", "lossy-homodyne", "lossy-photocount")

_CSV_COLUMNS = [
    "param",
    "J1_oracle",
    "J2_oracle",
    "J3_oracle",
    "J4_oracle",
    "J1_scheme",
    "J2_scheme",
    "J3_scheme",
    "J4_scheme",
    "E_f",
    "E_f_bound",
    "E_N",
    "simon_margin",
    "nu_minus",
]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here reserves 2 for
    physics failures, so usage problems exit 1 like any other config error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_state_options(parser) -> None:
    parser.add_argument("--state", metavar="FILE", help="load the state from a JSON file")
    parser.add_argument("--generator", choices=_GENERATORS, help="generate the state instead")
    parser.add_argument("--r", type=float, help="squeezing parameter for tmsv/tmst")
    parser.add_argument("--nu1", type=float, help="first thermal symplectic eigenvalue")
    parser.add_argument("--nu2", type=float, help="second thermal symplectic eigenvalue")
    parser.add_argument("--seed", type=int, help="64-bit seed behind all randomness (default 0)")


def _add_detector_options(parser) -> None:
    parser.add_argument("--detector", choices=_DETECTORS, help="detector kind (default ideal)")
    parser.add_argument("--eta", type=float, help="detector efficiency in (0, 1]")
    parser.add_argument("--shots", type=int, help="shots per setting (omit for exact moments)")


def _add_output_options(parser) -> None:
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), help="report format")
    parser.add_argument("--config", metavar="FILE", help="JSON config file; explicit flags win")


def build_parser() -> _Parser:
    parser = _Parser(prog="gaussbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    run = sub.add_parser("run", help="oracle plus reconstruction schemes on one state")
    run.add_argument("--scheme", choices=_SCHEMES, help="which pipeline(s) to run (default both)")
    for p in (run,):
        _add_state_options(p)
        _add_detector_options(p)
        _add_output_options(p)

    for name, blurb in (
        ("oracle", "invariants and measures straight from the covariance matrix"),
        ("scheme1", "three-invariant reconstruction from ten readings"),
        ("scheme2", "four-invariant reconstruction after standard-form prep"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_state_options(p)
        _add_detector_options(p)
        _add_output_options(p)

    swp = sub.add_parser("sweep", help="grid over r or eta, one CSV row per point")
    swp.add_argument("--param", choices=("r", "eta"), help="which parameter the grid varies")
    swp.add_argument("--start", type=float, help="first grid value")
    swp.add_argument("--stop", type=float, help="last grid value (inclusive)")
    swp.add_argument("--steps", type=int, help="number of grid points")
    swp.add_argument("--scheme", choices=_SCHEMES, help="pipeline for the scheme columns")
    _add_state_options(swp)
    _add_detector_options(swp)
    _add_output_options(swp)

    val = sub.add_parser("validate", help="physicality check; exit 0 iff physical")
    _add_state_options(val)
    _add_output_options(val)

    rep = sub.add_parser("replay", help="re-run reconstructions from a report's transcripts")
    rep.add_argument("--report", metavar="FILE", help="report JSON produced by run")
    rep.add_argument("--config", metavar="FILE", help="JSON config file; explicit flags win")

    return parser


def _merge_config(args) -> dict:
    """Fold the optional config file under the explicit flags."""
    ns = dict(vars(args))
    path = ns.get("config")
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must contain a JSON object")
        for key, value in loaded.items():
            if key not in ns:
                raise ConfigError(f"unknown config key {key!r}")
            if ns[key] is None:
                ns[key] = value
    return ns


def _resolve_state(cfg, rng_seed) -> tuple[QuadCovariance, dict]:
    """Build the input state and a JSON-able description of its source."""
    state_path = cfg.get("state")
    generator = cfg.get("generator")
    if (state_path is None) == (generator is None):
        raise ConfigError("exactly one of --state and --generator is required")

    if state_path is not None:
        state = load_state(state_path)
        if isinstance(state, ModeCovariance):
            g = mode_to_quad(state)
        else:
            g = state
        return g, {"source": "file", "path": str(state_path)}

    r = cfg.get("r")
    nu1 = cfg.get("nu1")
    nu2 = cfg.get("nu2")
    params: dict = {}
    if generator == "vacuum":
        g = vacuum_state()
    elif generator == "tmsv":
        r = 0.5 if r is None else float(r)
        g = tmsv_state(r)
        params["r"] = r
    elif generator == "thermal":
        nu1 = 1.0 if nu1 is None else float(nu1)
        nu2 = 1.0 if nu2 is None else float(nu2)
        g = thermal_state(nu1, nu2)
        params.update(nu1=nu1, nu2=nu2)
    elif generator == "tmst":
        r = 0.5 if r is None else float(r)
        nu1 = 1.0 if nu1 is None else float(nu1)
        nu2 = 1.0 if nu2 is None else float(nu2)
        g = two_mode_squeezed_thermal(r, nu1, nu2)
        params.update(r=r, nu1=nu1, nu2=nu2)
    elif generator == "random":
        g = random_state(rng_seed)
    else:
        raise ConfigError(f"unknown generator {generator!r}")
    return g, {"source": "generator", "name": generator, "params": params}


def _resolve_detector(cfg) -> DetectorModel:
    kind = cfg.get("detector") or "ideal"
    eta = cfg.get("eta")
    shots = cfg.get("shots")
    if kind == "ideal" and eta is not None and float(eta) != 1.0:
        raise ConfigError("--eta requires a lossy detector kind")
    if kind == "ideal" and shots is not None:
        raise ConfigError("--shots requires a lossy detector kind")
    try:
        return DetectorModel(
            kind=kind,
            eta=1.0 if eta is None else float(eta),
            shots=None if shots is None else int(shots),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _opt(value):
    return None if value is None else float(value)


def _invariants_dict(inv: InvariantSet) -> dict:
    return {
        "j1": float(inv.j1),
        "j2": float(inv.j2),
        "j3": float(inv.j3),
        "j4": _opt(inv.j4),
        "i1": float(inv.i1),
        "i2": float(inv.i2),
        "i3": float(inv.i3),
        "i4": _opt(inv.i4),
    }


def _entanglement_dict(rep: EntanglementReport) -> dict:
    return {
        "separable": None if rep.separable is None else bool(rep.separable),
        "simon_lhs_minus_rhs": _opt(rep.simon_lhs_minus_rhs),
        "eof": _opt(rep.eof),
        "eof_lower_bound": _opt(rep.eof_lower_bound),
        "log_negativity": _opt(rep.log_negativity),
        "nu_tilde_minus": _opt(rep.nu_tilde_minus),
    }


def _observation_dict(obs) -> dict:
    out = {
        "theta": float(obs.setting.theta),
        "phi": float(obs.setting.phi),
        "n_prime": float(obs.n_prime),
        "j_prime": float(obs.j_prime),
        "purity": float(obs.purity),
        "wigner0": float(obs.wigner0),
    }
    if obs.n_stderr is not None:
        out["n_stderr"] = float(obs.n_stderr)
    if obs.j_stderr is not None:
        out["j_stderr"] = float(obs.j_stderr)
    return out


def _rel(delta: float, reference: float):
    return None if reference == 0.0 else delta / abs(reference)


def _deltas_dict(scheme_inv: InvariantSet, oracle_inv: InvariantSet) -> dict:
    out = {}
    for name in ("j1", "j2", "j3", "j4"):
        got = getattr(scheme_inv, name)
        want = getattr(oracle_inv, name)
        if got is None or want is None:
            out[f"{name}_abs"] = None
            out[f"{name}_rel"] = None
        else:
            delta = abs(float(got) - float(want))
            out[f"{name}_abs"] = delta
            out[f"{name}_rel"] = _rel(delta, float(want))
    return out


def _scheme_section(result: SchemeResult, oracle_inv: InvariantSet) -> dict:
    section = {
        "status": result.status,
        "special_form": result.special_form,
        "invariants": _invariants_dict(result.invariants),
        "stderr": result.invariant_stderr,
        "deltas": _deltas_dict(result.invariants, oracle_inv),
        "entanglement": _entanglement_dict(result.entanglement),
        "observations": [_observation_dict(o) for o in result.observations],
        "transcript": [rec.to_dict() for rec in result.transcript],
    }
    if result.scheme == "scheme2":
        section["cross_block"] = {
            "ms_real": _opt(result.ms_real),
            "ms_imag": _opt(result.ms_imag),
            "mc_magnitude": _opt(result.mc_magnitude),
        }
        section["standard_form_residuals"] = {
            "m1": _opt(result.residual_m1),
            "m2": _opt(result.residual_m2),
        }
    return section


def _build_report(cfg, scheme_choice: str) -> dict:
    seed = 0 if cfg.get("seed") is None else int(cfg["seed"])
    root = np.random.SeedSequence(seed)
    gen_seq, s1_seq, s2_seq = root.spawn(3)

    g, source = _resolve_state(cfg, gen_seq)
    det = _resolve_detector(cfg)
    phys = validate_physical(g)
    if not phys.physical:
        raise GaussBenchError(
            "state is unphysical: symplectic eigenvalues "
            f"nu_minus={phys.nu_minus:.12g}, nu_plus={phys.nu_plus:.12g}"
        )
    v = quad_to_mode(g)
    oracle_inv = invariants_quad(g)

    report = {
        "seed": seed,
        "state": {
            **source,
            "quad_entries": [float(x) for x in g.entries.reshape(-1)],
        },
        "detector": {"kind": det.kind, "eta": det.eta, "shots": det.shots},
        "physicality": {
            "physical": bool(phys.physical),
            "nu_minus": float(phys.nu_minus),
            "nu_plus": float(phys.nu_plus),
        },
        "oracle": {
            "invariants": _invariants_dict(oracle_inv),
            "entanglement": _entanglement_dict(entanglement_report(oracle_inv)),
        },
        "scheme1": None,
        "scheme2": None,
        "consistency": None,
    }

    res1 = res2 = None
    if scheme_choice in ("scheme1", "both"):
        res1 = scheme1(v, det, seed=s1_seq)
        report["scheme1"] = _scheme_section(res1, oracle_inv)
    if scheme_choice in ("scheme2", "both"):
        res2 = scheme2(v, det, seed=s2_seq)
        report["scheme2"] = _scheme_section(res2, oracle_inv)
    if res1 is not None and res2 is not None:
        chk = consistency_check(res1, res2)
        report["consistency"] = {
            "delta_j1": chk.delta_j1,
            "delta_j2": chk.delta_j2,
            "delta_j3": chk.delta_j3,
            "max_delta": chk.max_delta,
            "tol": chk.tol,
            "within_tolerance": bool(chk.within_tolerance),
        }
    return report


def _csv_cell(value) -> str:
    return "" if value is None else repr(float(value))


def _csv_row(param_value, report: dict) -> list:
    oracle = report["oracle"]["invariants"]
    scheme = report.get("scheme2") or report.get("scheme1")
    if scheme is not None:
        inv = scheme["invariants"]
        ent = scheme["entanglement"]
    else:
        inv = {"j1": None, "j2": None, "j3": None, "j4": None}
        ent = report["oracle"]["entanglement"]
    return [
        _csv_cell(param_value),
        _csv_cell(oracle["j1"]),
        _csv_cell(oracle["j2"]),
        _csv_cell(oracle["j3"]),
        _csv_cell(oracle["j4"]),
        _csv_cell(inv["j1"]),
        _csv_cell(inv["j2"]),
        _csv_cell(inv["j3"]),
        _csv_cell(inv["j4"]),
        _csv_cell(ent["eof"]),
        _csv_cell(ent["eof_lower_bound"]),
        _csv_cell(ent["log_negativity"]),
        _csv_cell(ent["simon_lhs_minus_rhs"]),
        _csv_cell(ent["nu_tilde_minus"]),
    ]


def _render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _render_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(cfg, scheme_choice: str) -> int:
    report = _build_report(cfg, scheme_choice)
    fmt = cfg.get("format") or "json"
    if fmt == "csv":
        param = cfg.get("r")
        text = _render_csv([_csv_row(param, report)])
    else:
        text = _render_json(report)
    _emit(text, cfg.get("out"))
    return 0


def _cmd_sweep(cfg) -> int:
    param = cfg.get("param")
    if param not in ("r", "eta"):
        raise ConfigError("--param must be 'r' or 'eta'")
    if cfg.get("start") is None or cfg.get("stop") is None or cfg.get("steps") is None:
        raise ConfigError("sweep needs --start, --stop and --steps")
    steps = int(cfg["steps"])
    if steps <= 0:
        raise ConfigError(f"sweep grid must be non-empty, got steps={steps}")
    start, stop = float(cfg["start"]), float(cfg["stop"])
    if not (np.isfinite(start) and np.isfinite(stop)):
        raise ConfigError("sweep grid bounds must be finite")
    grid = np.linspace(start, stop, steps)
    scheme_choice = cfg.get("scheme") or "scheme2"

    if param == "r":
        if cfg.get("generator") not in (None, "tmsv", "tmst"):
            raise ConfigError("an r sweep needs the tmsv or tmst generator")
        cfg = {**cfg, "generator": cfg.get("generator") or "tmsv", "state": None}
    else:
        if (cfg.get("detector") or "ideal") == "ideal":
            raise ConfigError("an eta sweep needs a lossy detector kind")

    rows = []
    for value in grid:
        point = dict(cfg)
        point[param] = float(value)
        report = _build_report(point, scheme_choice)
        rows.append(_csv_row(float(value), report))

    fmt = cfg.get("format") or "csv"
    if fmt == "json":
        payload = {"param": param, "columns": _CSV_COLUMNS, "rows": rows}
        text = _render_json(payload)
    else:
        text = _render_csv(rows)
    _emit(text, cfg.get("out"))
    return 0


def _cmd_validate(cfg) -> int:
    seed = 0 if cfg.get("seed") is None else int(cfg["seed"])
    gen_seq = np.random.SeedSequence(seed).spawn(1)[0]
    g, source = _resolve_state(cfg, gen_seq)
    phys = validate_physical(g)
    payload = {
        "state": source,
        "physical": bool(phys.physical),
        "nu_minus": float(phys.nu_minus),
        "nu_plus": float(phys.nu_plus),
        "positive_definite": bool(phys.positive_definite),
        "symmetric": bool(phys.symmetric),
        "slack": float(phys.slack),
    }
    _emit(_render_json(payload), cfg.get("out"))
    return 0 if phys.physical else 2


def _cmd_replay(cfg) -> int:
    path = cfg.get("report")
    if not path:
        raise ConfigError("replay needs --report")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            report = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report {path} is not valid JSON: {exc}") from exc

    checked = 0
    for name in ("scheme1", "scheme2"):
        section = report.get(name)
        if section is None:
            continue
        records = [TranscriptRecord.from_dict(r) for r in section["transcript"]]
        inv, _ = reconstruct_from_transcript(records, name, section.get("special_form"))
        reported = section["invariants"]
        for key in ("j1", "j2", "j3", "j4"):
            got = getattr(inv, key)
            want = reported.get(key)
            if (got is None) != (want is None):
                raise GaussBenchError(f"replay of {name} disagrees on presence of {key}")
            if got is not None and float(got) != float(want):
                raise GaussBenchError(
                    f"replay of {name} reproduced {key}={got!r}, report says {want!r}"
                )
        checked += 1
    if checked == 0:
        raise ConfigError("report contains no scheme sections to replay")
    sys.stdout.write(f"replayed {checked} transcript(s): invariants reproduced exactly\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        command = args.command
        if command == "run":
            return _cmd_run(cfg, cfg.get("scheme") or "both")
        if command in ("oracle", "scheme1", "scheme2"):
            return _cmd_run(cfg, command)
        if command == "sweep":
            return _cmd_sweep(cfg)
        if command == "validate":
            return _cmd_validate(cfg)
        if command == "replay":
            return _cmd_replay(cfg)
        raise ConfigError(f"unknown command {command!r}")
    except ConfigError as exc:
        print(f"gaussbench: config error: {exc}", file=sys.stderr)
        return 1
    except GaussBenchError as exc:
        print(f"gaussbench: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
