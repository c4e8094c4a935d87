import os
import functools
import tqdm
import tqdm.notebook as tqdm_notebook
from tqdm.contrib.concurrent import process_map
import numpy as np

PBARS = {True: tqdm_notebook.tqdm, False: tqdm.tqdm}

WORKERS_ENV_VAR = "DICKEQUIV_WORKERS"


def echo(message, verbose=True):
    if verbose:
        print(message)


def default_workers():
    """Number of worker processes for grid evaluations.

    Reads DICKEQUIV_WORKERS if set, otherwise the number of cpus this
    process may run on.

    Returns
    -------
    workers: int
        positive number of workers.
    """
    env = os.environ.get(WORKERS_ENV_VAR)
    if env is not None and env.strip() != "":
        try:
            workers = int(env)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {env!r}.")
        if workers < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be a positive integer, got {env!r}.")
        return workers
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return max(1, os.cpu_count() or 1)


def map_grid(func, points, workers=1, verbose=False, notebook_progressbar=False, **kwargs):
    """Evaluate func on every grid point, optionally in a process pool.

    Results come back in the order of points regardless of workers,
    so callers can assemble output files deterministically.

    Parameters
    ----------
    func: callable
        picklable (module level) function of a single grid point.
    points: list
        grid points to evaluate.
    workers: int, optional
        number of processes. 1 evaluates in this process.
        default is 1.
    verbose: bool, optional
        show a progress bar.
        default is False.
    notebook_progressbar: bool, optional
        use progress bar optimized for notebook output.
        default is False.
    kwargs: kwarg dict
        fixed keyword arguments forwarded to func.

    Returns
    -------
    results: list
        func(point, **kwargs) for each point, in order.
    """
    if kwargs:
        func = functools.partial(func, **kwargs)
    points = list(points)
    if workers <= 1 or len(points) <= 1:
        return [func(point) for point in PBARS[notebook_progressbar](points, disable=not verbose)]
    return process_map(func, points, max_workers=workers, chunksize=1, disable=not verbose)


def beta_grid(beta_min, beta_max, steps, scale="linear"):
    """Inverse temperature grid.

    Parameters
    ----------
    beta_min: float
        smallest inverse temperature (> 0).
    beta_max: float
        largest inverse temperature (>= beta_min).
    steps: int
        number of grid points.
    scale: str, optional
        "linear" or "log" spacing.
        default is "linear".

    Returns
    -------
    betas: np.ndarray
        strictly increasing grid of inverse temperatures.
    """
    if isinstance(steps, bool) or not isinstance(steps, (int, float, np.integer, np.floating)):
        raise ValueError(f"beta_steps must be an integer, got {steps!r}.")
    if not np.isfinite(steps) or steps != np.floor(steps):
        raise ValueError(f"beta_steps must be an integer, got {steps!r}.")
    steps = int(steps)
    try:
        beta_min, beta_max = float(beta_min), float(beta_max)
    except (TypeError, ValueError):
        raise ValueError(f"beta_min and beta_max must be numbers, got {beta_min!r} and {beta_max!r}.")
    if steps < 1:
        raise ValueError(f"beta grid needs at least one point, got steps={steps}.")
    if not beta_min > 0:
        raise ValueError(f"beta grid must be strictly positive, got beta_min={beta_min}.")
    if steps == 1:
        return np.asarray([float(beta_min)])
    if beta_max <= beta_min:
        raise ValueError(f"beta_max={beta_max} must exceed beta_min={beta_min} for a multi-point grid.")
    if scale == "linear":
        return np.linspace(beta_min, beta_max, steps)
    elif scale == "log":
        return np.geomspace(beta_min, beta_max, steps)
    else:
        raise ValueError(f"beta_scale must be 'linear' or 'log', got {scale!r}.")


def format_float(value):
    """Shortest round-trip decimal for a float, empty string for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))
