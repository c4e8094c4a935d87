"""Command line runner: parameter sweeps, critical temperatures and model comparisons.

Subcommands sweep, tc, compare and converge read a JSON run configuration
(--config) and apply command line overrides on top. Precedence, lowest first:
built-in defaults, the JSON file, the DICKEQUIV_WORKERS environment variable
(worker count only), command line flags.

Exit statuses: 0 success, 2 configuration error, 3 numerical failure at a
grid point, 4 unknown subcommand.
"""
import argparse
import collections
import csv
import datetime
import json
import os
import sys
import numpy as np
from . import hamiltonians
from . import mean_field
from . import thermodynamics
from . import version
from .utils import echo, map_grid, beta_grid, default_workers, format_float, WORKERS_ENV_VAR
from .algebra import MAX_ATOMS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_UNKNOWN_COMMAND = 4

DEFAULT_CONFIG = {
    "kinds": list(hamiltonians.MODEL_KINDS),
    "epsilon": 1.0,
    "lambda": 1.0,
    "omega": 1.0,
    "atoms": [4],
    "betas": None,
    "beta_min": 0.1,
    "beta_max": 10.0,
    "beta_steps": 5,
    "beta_scale": "log",
    "tol": 1e-8,
    "max_cutoff": thermodynamics.MAX_CUTOFF,
    "out": ".",
    "format": "csv",
    "workers": None,
    "verbose": False,
    "use_tensorflow": False,
}

BETA_GRID_KEYS = ("beta_min", "beta_max", "beta_steps", "beta_scale")

SWEEP_COLUMNS = [
    "kind",
    "n_atoms",
    "beta",
    "f",
    "u",
    "s",
    "jx2_per_atom2",
    "jz_per_atom",
    "photon_density",
    "cutoff_used",
]
TC_COLUMNS = ["kind", "epsilon", "lambda", "beta_c", "t_c", "exists", "beta_c_upper"]
COMPARE_COLUMNS = [
    "beta",
    "f_dicke",
    "f_exact",
    "f_reslen",
    "f_lz",
    "f_limit_exact",
    "d_dicke_exact",
    "d_reslen_exact",
    "d_lz_exact",
    "f_dicke_spin",
    "d_dicke_spin_exact",
    "lz_window",
]
CONVERGENCE_COLUMNS = ["beta", "n_atoms", "d_dicke_exact", "d_dicke_spin_exact"]
CONVERGE_COLUMNS = ["beta", "cutoff", "f"]

RunConfig = collections.namedtuple(
    "RunConfig",
    [
        "kinds",
        "epsilons",
        "lambdas",
        "omega",
        "atoms",
        "betas",
        "tol",
        "max_cutoff",
        "out",
        "fmt",
        "workers",
        "verbose",
        "use_tensorflow",
    ],
)


class GridPointError(RuntimeError):
    """Numerical failure while evaluating one grid point."""


def load_config(path):
    """Read a JSON run configuration into a dict."""
    try:
        with open(path) as config_file:
            config = json.load(config_file)
    except (IOError, OSError) as err:
        raise ValueError(f"cannot read config file {path}: {err}")
    except json.JSONDecodeError as err:
        raise ValueError(f"config file {path} is not valid JSON: {err}")
    if not isinstance(config, dict):
        raise ValueError(f"config file {path} must hold a JSON object.")
    unknown = sorted(set(config) - set(DEFAULT_CONFIG))
    if unknown:
        raise ValueError(f"unknown config keys {unknown} in {path}.")
    return config


def _as_list(value):
    if value is None:
        return []
    if isinstance(value, (list, tuple, np.ndarray)):
        return list(value)
    return [value]


def _positive_float(value, name, allow_zero=False):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a number, got {value!r}.")
    if not np.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'>= 0' if allow_zero else '> 0'}, got {value}.")
    return value


def _positive_int(value, name, upper=None):
    if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise ValueError(f"{name} must be a positive integer, got {value!r}.")
    if not np.isfinite(value) or value != np.floor(value) or value < 1 or (upper is not None and value > upper):
        bounds = f"in [1, {upper}]" if upper is not None else "positive"
        raise ValueError(f"{name} must be {bounds} integers, got {value!r}.")
    return int(value)


def build_config(file_config=None, overrides=None):
    """Merge defaults, a config file dict, the environment and overrides into a RunConfig.

    Parameters
    ----------
    file_config: dict, optional
        contents of a JSON config file.
    overrides: dict, optional
        command line values; None entries are ignored. Giving any of
        beta_min, beta_max, beta_steps, beta_scale replaces an explicit
        betas list from lower levels.

    Returns
    -------
    config: RunConfig
        validated configuration.
    """
    merged = dict(DEFAULT_CONFIG)
    merged.update(file_config or {})
    if os.environ.get(WORKERS_ENV_VAR):
        merged["workers"] = default_workers()
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    if any(k in overrides for k in BETA_GRID_KEYS) and "betas" not in overrides:
        merged["betas"] = None
    merged.update(overrides)

    kinds = [hamiltonians.canonical_kind(kind) for kind in _as_list(merged["kinds"])]
    if not kinds:
        raise ValueError("at least one model kind is required.")
    kinds = [kind for kind in hamiltonians.MODEL_KINDS if kind in kinds]

    epsilons = [_positive_float(e, "epsilon") for e in _as_list(merged["epsilon"])]
    lambdas = [_positive_float(lam, "lambda", allow_zero=True) for lam in _as_list(merged["lambda"])]
    if not epsilons or not lambdas:
        raise ValueError("epsilon and lambda need at least one value each.")
    omega = _positive_float(merged["omega"], "omega")

    atoms = _as_list(merged["atoms"])
    if not atoms:
        raise ValueError("at least one atom count is required.")
    atoms = sorted(set(_positive_int(n_atoms, "atom counts", upper=MAX_ATOMS) for n_atoms in atoms))

    if merged["betas"] is not None:
        try:
            betas = np.asarray(_as_list(merged["betas"]), dtype=np.float64)
        except (TypeError, ValueError):
            raise ValueError(f"betas must be a list of numbers, got {merged['betas']!r}.")
        if betas.size == 0:
            raise ValueError("the beta grid is empty.")
    else:
        betas = beta_grid(merged["beta_min"], merged["beta_max"], merged["beta_steps"], merged["beta_scale"])
    if not np.all(np.isfinite(betas)) or np.any(betas <= 0):
        raise ValueError("the beta grid must be strictly positive.")
    if np.any(np.diff(betas) <= 0):
        raise ValueError("the beta grid must be strictly increasing.")

    tol = _positive_float(merged["tol"], "tol")
    max_cutoff = _positive_int(merged["max_cutoff"], "max_cutoff")
    fmt = str(merged["format"]).lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {merged['format']!r}.")
    workers = merged["workers"]
    if workers is None:
        workers = default_workers()
    workers = _positive_int(workers, "workers")

    return RunConfig(
        kinds=kinds,
        epsilons=epsilons,
        lambdas=lambdas,
        omega=omega,
        atoms=atoms,
        betas=[float(beta) for beta in betas],
        tol=tol,
        max_cutoff=max_cutoff,
        out=str(merged["out"]),
        fmt=fmt,
        workers=workers,
        verbose=bool(merged["verbose"]),
        use_tensorflow=bool(merged["use_tensorflow"]),
    )


def _single_parameters(config, command):
    if len(config.epsilons) != 1 or len(config.lambdas) != 1:
        raise ValueError(f"{command} takes a single epsilon and a single lambda; use tc for parameter grids.")
    return config.epsilons[0], config.lambdas[0]


def _plain(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_table(config, name, columns, rows, command):
    """Write rows to <out>/<name>.<fmt>.

    CSV files carry one '#' provenance line, then the header row. JSON files
    hold {"history", "columns", "rows"}.

    Returns
    -------
    path: str
        path of the written file.
    """
    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, f"{name}.{config.fmt}")
    history = version.history_string(notes=f"{command} command")
    rows = [{column: _plain(row[column]) for column in columns} for row in rows]
    if config.fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as outfile:
            outfile.write(f"# {history}\n")
            writer = csv.writer(outfile, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([row[c] if isinstance(row[c], str) else format_float(row[c]) for c in columns])
    else:
        with open(path, "w", encoding="utf-8") as outfile:
            json.dump({"history": history, "columns": columns, "rows": rows}, outfile, indent=1)
            outfile.write("\n")
    echo(f"{datetime.datetime.now()} Wrote {len(rows)} rows to {path}", verbose=config.verbose)
    return path


def read_table(path):
    """Read a table written by write_table back into (columns, rows).

    CSV values come back as strings, JSON values with their types.
    """
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as infile:
            data = json.load(infile)
        return data["columns"], data["rows"]
    with open(path, newline="", encoding="utf-8") as infile:
        lines = [line for line in infile if not line.startswith("#")]
    reader = csv.reader(lines)
    columns = next(reader)
    return columns, [dict(zip(columns, values)) for values in reader]


def _sweep_point(point, epsilon, lam, omega, tol, max_cutoff, use_tensorflow=False):
    kind, n_atoms, beta = point
    try:
        params = hamiltonians.model_params(epsilon, lam, n_atoms, omega)
        thermo = thermodynamics.thermo_point(
            params, kind, beta, tol=tol, max_cutoff=max_cutoff, use_tensorflow=use_tensorflow
        )
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as err:
        raise GridPointError(f"kind={kind}, n_atoms={n_atoms}, beta={beta!r}: {err}")
    return {
        "kind": kind,
        "n_atoms": n_atoms,
        "beta": beta,
        "f": thermo.free_energy_per_atom,
        "u": thermo.internal_energy_per_atom,
        "s": thermo.entropy_per_atom,
        "jx2_per_atom2": thermo.jx2_per_atom2,
        "jz_per_atom": thermo.jz_per_atom,
        "photon_density": thermo.photon_density,
        "cutoff_used": thermo.cutoff_used,
    }


def cmd_sweep(config):
    """Finite-N thermodynamics of every (kind, N, beta) grid point into sweep.<fmt>."""
    epsilon, lam = _single_parameters(config, "sweep")
    points = [(kind, n_atoms, beta) for kind in config.kinds for n_atoms in config.atoms for beta in config.betas]
    echo(f"{datetime.datetime.now()} Sweeping {len(points)} grid points...", verbose=config.verbose)
    rows = map_grid(
        _sweep_point,
        points,
        workers=config.workers,
        verbose=config.verbose,
        epsilon=epsilon,
        lam=lam,
        omega=config.omega,
        tol=config.tol,
        max_cutoff=config.max_cutoff,
        use_tensorflow=config.use_tensorflow,
    )
    order = {kind: i for i, kind in enumerate(hamiltonians.MODEL_KINDS)}
    rows = sorted(rows, key=lambda row: (order[row["kind"]], row["n_atoms"], row["beta"]))
    write_table(config, "sweep", SWEEP_COLUMNS, rows, "sweep")
    return EXIT_OK


def cmd_tc(config):
    """Gap-equation critical temperatures over kinds x epsilon x lambda into tc.<fmt>."""
    if hamiltonians.DICKE in config.kinds:
        raise ValueError("tc solves gap equations of effective models only; remove Dicke from kinds.")
    rows = []
    for kind in config.kinds:
        for epsilon in config.epsilons:
            for lam in config.lambdas:
                solution = mean_field.critical_beta(kind, epsilon, lam)
                rows.append(
                    {
                        "kind": kind,
                        "epsilon": epsilon,
                        "lambda": lam,
                        "beta_c": solution.beta_c,
                        "t_c": mean_field.critical_temperature(solution),
                        "exists": solution.beta_c is not None,
                        "beta_c_upper": solution.beta_c_upper,
                    }
                )
                if solution.out_of_range:
                    echo(
                        f"{kind} at epsilon={epsilon}, lambda={lam}: transition lies outside "
                        f"beta in [{mean_field.BETA_LO}, {mean_field.BETA_HI}].",
                        verbose=config.verbose,
                    )
    write_table(config, "tc", TC_COLUMNS, rows, "tc")
    return EXIT_OK


def _compare_point(point, epsilon, lam, omega, tol, max_cutoff, effective_kinds, use_tensorflow=False):
    beta, n_atoms = point
    try:
        params = hamiltonians.model_params(epsilon, lam, n_atoms, omega)
        ladder = thermodynamics.cutoff_ladder(params, beta, tol=tol, max_cutoff=max_cutoff, use_tensorflow=use_tensorflow)
        cutoff, f_dicke = ladder[-2]
        photons = thermodynamics.free_photon_log_partition(beta, omega) / (beta * n_atoms)
        result = {"beta": beta, "n_atoms": n_atoms, "cutoff": cutoff, "f_dicke": f_dicke, "f_dicke_spin": f_dicke + photons}
        for kind in effective_kinds:
            result[kind] = thermodynamics.free_energy_per_atom(params, kind, beta, use_tensorflow=use_tensorflow)
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as err:
        raise GridPointError(f"n_atoms={n_atoms}, beta={beta!r}: {err}")
    return result


def cmd_compare(config):
    """Dicke vs the three effective models at N_max, plus Dicke convergence in N.

    Writes compare.<fmt> (one row per beta) and convergence.<fmt> (one row
    per beta and atom count).
    """
    if hamiltonians.DICKE not in config.kinds:
        raise ValueError("compare needs Dicke among the configured kinds.")
    epsilon, lam = _single_parameters(config, "compare")
    n_max = max(config.atoms)
    points = [(beta, n_atoms) for beta in config.betas for n_atoms in config.atoms]
    results = map_grid(
        _compare_point,
        points,
        workers=config.workers,
        verbose=config.verbose,
        epsilon=epsilon,
        lam=lam,
        omega=config.omega,
        tol=config.tol,
        max_cutoff=config.max_cutoff,
        effective_kinds=hamiltonians.EFFECTIVE_KINDS,
        use_tensorflow=config.use_tensorflow,
    )
    results = sorted(results, key=lambda r: (r["beta"], r["n_atoms"]))
    limits = {
        point.beta: point.free_energy
        for point in mean_field.order_parameter_curve(hamiltonians.EXACT, config.betas, epsilon, lam)
    }
    compare_rows = []
    convergence_rows = []
    for result in results:
        f_exact = result[hamiltonians.EXACT]
        convergence_rows.append(
            {
                "beta": result["beta"],
                "n_atoms": result["n_atoms"],
                "d_dicke_exact": abs(result["f_dicke"] - f_exact),
                "d_dicke_spin_exact": abs(result["f_dicke_spin"] - f_exact),
            }
        )
        if result["n_atoms"] != n_max:
            continue
        beta = result["beta"]
        compare_rows.append(
            {
                "beta": beta,
                "f_dicke": result["f_dicke"],
                "f_exact": f_exact,
                "f_reslen": result[hamiltonians.RESLEN],
                "f_lz": result[hamiltonians.LIBERTI_ZAFFINO],
                "f_limit_exact": limits[beta],
                "d_dicke_exact": abs(result["f_dicke"] - f_exact),
                "d_reslen_exact": abs(result[hamiltonians.RESLEN] - f_exact),
                "d_lz_exact": abs(result[hamiltonians.LIBERTI_ZAFFINO] - f_exact),
                "f_dicke_spin": result["f_dicke_spin"],
                "d_dicke_spin_exact": abs(result["f_dicke_spin"] - f_exact),
                "lz_window": all(hamiltonians.lz_validity_window(beta, epsilon, lam)),
            }
        )
    write_table(config, "compare", COMPARE_COLUMNS, compare_rows, "compare")
    write_table(config, "convergence", CONVERGENCE_COLUMNS, convergence_rows, "compare")
    return EXIT_OK


def _converge_point(beta, epsilon, lam, omega, n_atoms, tol, max_cutoff, use_tensorflow=False):
    try:
        params = hamiltonians.model_params(epsilon, lam, n_atoms, omega)
        ladder = thermodynamics.cutoff_ladder(params, beta, tol=tol, max_cutoff=max_cutoff, use_tensorflow=use_tensorflow)
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as err:
        raise GridPointError(f"kind={hamiltonians.DICKE}, n_atoms={n_atoms}, beta={beta!r}: {err}")
    return [{"beta": beta, "cutoff": cutoff, "f": f} for cutoff, f in ladder]


def cmd_converge(config):
    """Dicke boson cutoff ladders at N = max(atoms) for each beta into converge.<fmt>."""
    if hamiltonians.DICKE not in config.kinds:
        raise ValueError("converge needs Dicke among the configured kinds.")
    epsilon, lam = _single_parameters(config, "converge")
    ladders = map_grid(
        _converge_point,
        config.betas,
        workers=config.workers,
        verbose=config.verbose,
        epsilon=epsilon,
        lam=lam,
        omega=config.omega,
        n_atoms=max(config.atoms),
        tol=config.tol,
        max_cutoff=config.max_cutoff,
        use_tensorflow=config.use_tensorflow,
    )
    rows = [row for ladder in ladders for row in ladder]
    write_table(config, "converge", CONVERGE_COLUMNS, rows, "converge")
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "tc": cmd_tc,
    "compare": cmd_compare,
    "converge": cmd_converge,
}


def run_command(command, config):
    """Run a subcommand and map failures onto exit statuses."""
    try:
        return COMMANDS[command](config)
    except GridPointError as err:
        print(f"{command}: numerical failure at {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as err:
        print(f"{command}: invalid configuration: {err}", file=sys.stderr)
        return EXIT_CONFIG


def config_argparser(command):
    ap = argparse.ArgumentParser(
        prog=f"dickequiv_run.py {command}",
        description=(COMMANDS[command].__doc__ or "").splitlines()[0],
        epilog=f"Worker count defaults to ${WORKERS_ENV_VAR} or the available cpus.",
    )
    sp = ap.add_argument_group("Configuration Arguments.")
    sp.add_argument("--config", type=str, default=None, help="path to a JSON run configuration.")
    sp.add_argument("--workers", type=int, default=None, help="number of worker processes.")
    sp.add_argument("--verbose", default=None, action="store_true", help="lots of text ouputs.")
    return ap


def model_argparser(command):
    ap = config_argparser(command)
    sp = ap.add_argument_group("Model Arguments.")
    sp.add_argument(
        "--kinds", type=str, nargs="+", default=None, help=f"model kinds to run, any of {hamiltonians.MODEL_KINDS}."
    )
    sp.add_argument("--epsilon", type=float, nargs="+", default=None, help="qubit level splitting(s).")
    sp.add_argument("--lambda", dest="lam", type=float, nargs="+", default=None, help="atom-photon coupling(s).")
    sp.add_argument("--omega", type=float, default=None, help="photon energy (Dicke model only).")
    sp.add_argument("--atoms", type=int, nargs="+", default=None, help="atom counts N.")
    return ap


def run_argparser(command):
    ap = model_argparser(command)
    sp = ap.add_argument_group("Grid and Output Arguments.")
    sp.add_argument("--betas", type=float, nargs="+", default=None, help="explicit inverse temperature grid.")
    sp.add_argument("--beta-min", type=float, default=None, help="smallest inverse temperature.")
    sp.add_argument("--beta-max", type=float, default=None, help="largest inverse temperature.")
    sp.add_argument("--beta-steps", type=int, default=None, help="number of inverse temperatures.")
    sp.add_argument("--beta-scale", type=str, choices=["linear", "log"], default=None, help="grid spacing.")
    sp.add_argument("--tol", type=float, default=None, help="free energy tolerance of the boson cutoff ladder.")
    sp.add_argument("--max-cutoff", type=int, default=None, help="hard cap on the boson cutoff.")
    sp.add_argument("--out", type=str, default=None, help="output directory.")
    sp.add_argument("--format", type=str, choices=["csv", "json"], default=None, help="output file format.")
    sp = ap.add_argument_group("Backend Arguments.")
    sp.add_argument(
        "--use-tensorflow",
        default=None,
        action="store_true",
        help="diagonalize with tf.linalg instead of scipy.linalg.",
    )
    return ap


def _overrides(args):
    return {
        "kinds": args.kinds,
        "epsilon": args.epsilon,
        "lambda": args.lam,
        "omega": args.omega,
        "atoms": args.atoms,
        "betas": args.betas,
        "beta_min": args.beta_min,
        "beta_max": args.beta_max,
        "beta_steps": args.beta_steps,
        "beta_scale": args.beta_scale,
        "tol": args.tol,
        "max_cutoff": args.max_cutoff,
        "out": args.out,
        "format": args.format,
        "workers": args.workers,
        "verbose": args.verbose,
        "use_tensorflow": args.use_tensorflow,
    }


def usage():
    return f"usage: dickequiv_run.py {{{','.join(COMMANDS)}}} [--config PATH] [overrides ...]"


def main(argv=None):
    """Entry point. Returns the process exit status."""
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    if not argv:
        print(usage(), file=sys.stderr)
        return EXIT_CONFIG
    if argv[0] in ("-h", "--help"):
        print(usage())
        return EXIT_OK
    command = argv[0]
    if command not in COMMANDS:
        print(f"unknown subcommand {command!r}. {usage()}", file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    try:
        args = run_argparser(command).parse_args(argv[1:])
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_CONFIG
    try:
        file_config = load_config(args.config) if args.config is not None else None
        config = build_config(file_config, _overrides(args))
    except (ValueError, TypeError) as err:
        print(f"{command}: invalid configuration: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return run_command(command, config)
