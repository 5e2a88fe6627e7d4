"""Command-line interface: ``emchain {entropy,ppt,walk,build,verify}``.

Exit status: 0 success, 1 invariant or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .entanglement import ClosedFormSpectrum, ppt_test
from .exceptions import BudgetExceededError, InvalidInputError, NumericalError
from .model import LatticeWalkKernel, SymmetricChannel, load_kernel_file
from .reduction import rho_N, sigma_matrix
from .spectral import von_neumann_entropy
from .verify import run_checks
from .walk import walk_entropy_profile

ENTROPY_COLUMNS = ("q", "lambda_plus", "lambda_minus", "entropy", "N")
PPT_COLUMNS = ("q", "witness_value", "min_pt_eigenvalue", "verdict")
WALK_COLUMNS = ("N", "support_size", "entropy", "bound", "density")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    q_start: float = 0.0
    q_end: float = 1.0
    q_steps: int = 21
    N: int = 4
    log_base: str = "2"
    out: str | None = None

    def __post_init__(self):
        if not (0.0 <= self.q_start <= self.q_end <= 1.0):
            raise UsageError(f"need 0 <= q-start <= q-end <= 1, got {self.q_start}, {self.q_end}")
        if self.q_steps < 1:
            raise UsageError(f"q-steps must be >= 1, got {self.q_steps}")
        if self.N < 0:
            raise UsageError(f"sites N must be >= 0, got {self.N}")

    def grid(self) -> list[float]:
        if self.q_steps == 1:
            return [self.q_start]
        # rounding keeps grid points such as 0.5 exact
        return [float(np.round(x, 12)) for x in np.linspace(self.q_start, self.q_end, self.q_steps)]


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path: str | None, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _sweep(spec: SweepSpec, fn, jobs: int):
    grid = spec.grid()
    if jobs <= 1:
        return [fn(q) for q in grid]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, grid))


def entropy_rows(spec: SweepSpec, jobs: int = 1):
    def row(q):
        ch = SymmetricChannel(q)
        lam = ClosedFormSpectrum.from_q(q)
        s = von_neumann_entropy(sigma_matrix(ch.kernel, ch.init, spec.N), spec.log_base).entropy
        return (q, lam.lambda_plus, lam.lambda_minus, s, spec.N)

    return _sweep(spec, row, jobs)


def ppt_rows(spec: SweepSpec, jobs: int = 1):
    def row(q):
        r = ppt_test(q, spec.N)
        return (q, r.witness_value, r.min_eigenvalue_pt, r.verdict)

    return _sweep(spec, row, jobs)


def walk_rows(kernel: LatticeWalkKernel, init, n_max: int, base: str):
    return [
        (r.N, r.support_size, r.entropy, r.bound, r.density)
        for r in walk_entropy_profile(kernel, init, n_max, base)
    ]


def parse_hopping(text: str) -> LatticeWalkKernel:
    """``"simple"``, ``"lazy"``, ``"identity"`` or ``"offset:prob,..."`` such as ``"-1:0.5,1:0.5"``."""
    presets = {"simple": LatticeWalkKernel.simple, "lazy": LatticeWalkKernel.lazy,
               "identity": LatticeWalkKernel.identity}
    if text in presets:
        return presets[text]()
    hop = {}
    try:
        for item in text.split(","):
            c, p = item.split(":")
            hop[int(c)] = hop.get(int(c), 0.0) + float(p)
    except ValueError:
        raise UsageError(f"cannot parse hopping spec {text!r}; expected 'offset:prob,...'") from None
    return LatticeWalkKernel(hop)


def parse_support(text: str) -> dict[int, float]:
    """``"0"`` for a delta or ``"site:prob,..."``."""
    try:
        if ":" not in text:
            return {int(text): 1.0}
        return {int(s): float(p) for s, p in (item.split(":") for item in text.split(","))}
    except ValueError:
        raise UsageError(f"cannot parse initial support {text!r}") from None


def write_matrix(path: str | None, m: np.ndarray) -> None:
    lines = [f"dim {m.shape[0]}"] + [" ".join(fmt(x) for x in row) for row in m]
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def _sweep_spec(args) -> SweepSpec:
    return SweepSpec(args.q_start, args.q_end, args.q_steps, args.sites, args.log_base, args.out)


def cmd_entropy(args) -> int:
    spec = _sweep_spec(args)
    write_csv(spec.out, ENTROPY_COLUMNS, entropy_rows(spec, args.jobs))
    return 0


def cmd_ppt(args) -> int:
    spec = _sweep_spec(args)
    write_csv(spec.out, PPT_COLUMNS, ppt_rows(spec, args.jobs))
    return 0


def cmd_walk(args) -> int:
    kernel = parse_hopping(args.hop)
    rows = walk_rows(kernel, parse_support(args.init), args.n_max, args.log_base)
    write_csv(args.out, WALK_COLUMNS, rows)
    return 0


def cmd_build(args) -> int:
    if args.kernel:
        kernel, init = load_kernel_file(args.kernel)
    elif args.q is not None:
        ch = SymmetricChannel(args.q)
        kernel, init = ch.kernel, ch.init
    else:
        raise UsageError("build needs --kernel PATH or --q Q")
    fn = rho_N if args.what == "rho" else sigma_matrix
    write_matrix(args.out, fn(kernel, init, args.sites).entries)
    return 0


def cmd_verify(args) -> int:
    extra = [load_kernel_file(args.kernel)] if args.kernel else []
    results = run_checks(max_n=args.sites, seed=args.seed, extra_kernels=extra)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emchain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sites_default):
        p.add_argument("--sites", "-N", type=int, default=sites_default, help="N (sites 0..N)")
        p.add_argument("--log-base", choices=("2", "e"), default="2")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    def sweep(p):
        p.add_argument("--q-start", type=float, default=0.0)
        p.add_argument("--q-end", type=float, default=1.0)
        p.add_argument("--q-steps", type=int, default=21)
        p.add_argument("--jobs", type=int, default=1, help="worker threads for the sweep")

    p = sub.add_parser("entropy", help="entropy of rho_N over a q grid (symmetric channel)")
    common(p, 4)
    sweep(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("ppt", help="PPT test of rho_{N+1} across {0..N}|{N+1} over a q grid")
    common(p, 4)
    sweep(p)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("walk", help="entropy profile of a lattice walk")
    p.add_argument("--hop", default="simple", help="simple | lazy | identity | 'offset:prob,...'")
    p.add_argument("--init", default="0", help="initial site or 'site:prob,...'")
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--log-base", choices=("2", "e"), default="2")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("build", help="dump rho_N or sigma_{N+1} as a matrix file")
    common(p, 2)
    p.add_argument("--what", choices=("rho", "sigma"), default="rho")
    p.add_argument("--kernel", default=None, help="kernel/initial-distribution file")
    p.add_argument("--q", type=float, default=None, help="symmetric channel parameter")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--sites", "-N", type=int, default=6, help="largest N for brute-force checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernel", default=None, help="extra kernel file to include")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"emchain: usage error: {exc}", file=sys.stderr)
        return 2
    except (InvalidInputError, BudgetExceededError, NumericalError, OSError) as exc:
        print(f"emchain: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
