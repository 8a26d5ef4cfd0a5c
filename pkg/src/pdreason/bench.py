"""Random satisfiable rule sets and solver races.

Rule sets are built backwards from a hidden distribution: draw a random
distribution over worlds, draw random rule shapes, and read each rule's
probability off that distribution.  The hidden distribution satisfies every
rule, so the set is satisfiable by construction.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .constraints import build_system
from .model import Atom, Literal, PDFramework, PRule, conj_mask, entropy_bits, check_cap
from .solvers import SolverConfig, solve_direct, solve_lp, solve_max_linear_entropy, solve_sgd, SingularSystemError

BACKENDS = ("sgd", "direct-entropy", "sgd-entropy", "lp", "direct")
CSV_HEADER = ("backend", "n_literals", "n_rules", "seed", "rep", "wall_ms", "converged", "residual", "entropy_bits")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class BenchSpec:
    n_literals: int
    n_rules: int
    max_body: Optional[int] = None  # None means n_literals - 1
    seed: int = 0
    backends: tuple[str, ...] = ("sgd", "direct-entropy")
    repetitions: int = 10
    include_build: bool = False
    max_epochs: int = 200_000

    def __post_init__(self):
        if self.n_rules < 1:
            raise ValueError("n_rules must be at least 1")
        if self.n_literals < 2:
            raise ValueError("n_literals must be at least 2 so that bodies can avoid the head atom")
        check_cap(self.n_literals)
        for b in self.backends:
            if b not in BACKENDS:
                raise ValueError(f"unknown backend {b!r}; choose from {', '.join(BACKENDS)}")

    @property
    def body_limit(self) -> int:
        limit = self.n_literals - 1 if self.max_body is None else self.max_body
        return max(1, min(limit, self.n_literals - 1))


def generate_with_distribution(spec: BenchSpec, rng: Optional[np.random.Generator] = None, budget: int = 1000):
    """Return ``(framework, pi)`` where ``pi`` satisfies every generated rule."""
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    n = spec.n_literals
    atoms = tuple(Atom(i, f"s{i}") for i in range(n))
    pi = rng.random(1 << n)
    pi /= pi.sum()
    rules = []
    for _ in range(spec.n_rules):
        for _attempt in range(budget):
            h = int(rng.integers(n))
            head = Literal(atoms[h], bool(rng.random() < 0.5))
            k = int(rng.integers(1, spec.body_limit + 1))
            others = [i for i in range(n) if i != h]
            picked = rng.choice(others, size=k, replace=False)
            body = tuple(Literal(atoms[int(i)], bool(rng.random() < 0.5)) for i in sorted(picked))
            p_body = pi[conj_mask(n, body)].sum()
            if p_body <= 0:
                continue
            theta = float(pi[conj_mask(n, (head, *body))].sum() / p_body)
            if theta <= 0:
                continue
            rules.append(PRule(head, body, min(theta, 1.0)))
            break
        else:
            raise GenerationError("could not draw a rule with positive body and head probability")
    return PDFramework(atoms, tuple(rules)), pi


def generate_satisfiable(spec: BenchSpec, rng: Optional[np.random.Generator] = None) -> PDFramework:
    return generate_with_distribution(spec, rng)[0]


def _run_backend(backend: str, system, config: SolverConfig):
    if backend == "sgd":
        return solve_sgd(system, config)
    if backend == "direct-entropy":
        return solve_max_linear_entropy(system, config, "direct")
    if backend == "sgd-entropy":
        return solve_max_linear_entropy(system, config, "sgd")
    if backend == "lp":
        return solve_lp(system)
    if backend == "direct":
        try:
            return solve_direct(system)
        except SingularSystemError:
            return None
    raise ValueError(backend)


def run_bench(spec: BenchSpec) -> list[dict]:
    """One row per (repetition, backend).

    Repetition r uses its own generator spawned from the master seed, so a
    row can be reproduced without rerunning the others.
    """
    rows = []
    streams = np.random.SeedSequence(spec.seed).spawn(spec.repetitions)
    for rep, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        framework = generate_satisfiable(spec, rng)
        config = SolverConfig(seed=int(stream.generate_state(1)[0]), max_epochs=spec.max_epochs)
        prebuilt = build_system(framework, "owa")
        for backend in spec.backends:
            start = time.perf_counter()
            system = build_system(framework, "owa") if spec.include_build else prebuilt
            res = _run_backend(backend, system, config)
            wall = (time.perf_counter() - start) * 1000.0
            if res is None:
                converged, residual, ent = False, float("nan"), float("nan")
            else:
                converged, residual, ent = res.converged, res.residual, entropy_bits(res.dist.probs)
            rows.append(
                {
                    "backend": backend,
                    "n_literals": spec.n_literals,
                    "n_rules": spec.n_rules,
                    "seed": spec.seed,
                    "rep": rep,
                    "wall_ms": wall,
                    "converged": converged,
                    "residual": residual,
                    "entropy_bits": ent,
                }
            )
    return rows


def summarize(rows: Sequence[dict]) -> list[dict]:
    """Mean wall time, convergence rate, mean residual and entropy per backend and size."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["backend"], r["n_literals"], r["n_rules"]), []).append(r)
    out = []
    for (backend, n, m), rs in groups.items():
        out.append(
            {
                "backend": backend,
                "n_literals": n,
                "n_rules": m,
                "runs": len(rs),
                "mean_wall_ms": statistics.fmean(r["wall_ms"] for r in rs),
                "convergence_rate": sum(bool(r["converged"]) for r in rs) / len(rs),
                "mean_residual": statistics.fmean(r["residual"] for r in rs),
                "mean_entropy_bits": statistics.fmean(r["entropy_bits"] for r in rs),
            }
        )
    return out


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{r[k]:.6g}" if isinstance(r[k], float) else r[k]) for k in CSV_HEADER})
    return buf.getvalue()


def render_figures(rows: Sequence[dict], outdir) -> list[Path]:
    """Write wall-time and entropy plots per backend; returns the file paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = summarize(rows)
    backends = sorted({s["backend"] for s in summary})
    sizes = sorted({s["n_literals"] for s in summary})
    paths = []
    for key, ylabel, fname, log in (
        ("mean_wall_ms", "mean wall time (ms)", "bench_wall_ms.png", True),
        ("mean_entropy_bits", "entropy of solution (bits)", "bench_entropy.png", False),
    ):
        fig, ax = plt.subplots(figsize=(6, 4))
        for b in backends:
            pts = sorted((s["n_literals"], s[key]) for s in summary if s["backend"] == b)
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=b)
        if key == "mean_entropy_bits":
            ax.plot(sizes, sizes, linestyle=":", color="grey", label="n bits (uniform)")
        ax.set_xlabel("number of atoms")
        ax.set_ylabel(ylabel)
        if log:
            ax.set_yscale("log")
        ax.set_xticks(sizes)
        ax.legend(frameon=False)
        fig.tight_layout()
        path = outdir / fname
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def write_csv(rows: Sequence[dict], path) -> None:
    Path(path).write_text(rows_to_csv(rows))
