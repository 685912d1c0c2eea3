#!/usr/bin/env python3
"""
Fixed Point Set Toolkit
Command-line front end: closure, factorization, fixed point set tests,
kappa, the classification pipeline and the vertex-side oracle.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, List, Optional

from sympy import isprime

from fixpoint_sets.classify import all_fps, verify_against_oracle
from fixpoint_sets.config import Caps, caps_from_config, load_config
from fixpoint_sets.errors import FpsError
from fixpoint_sets.fps_engine import (broue_oracle, closure, is_exact, is_fixed_point_set,
                                      kappa_trajectory, orbit_factorization, vertex_Q)
from fixpoint_sets.reports import render, save_reports
from fixpoint_sets.setalg import PermSet, canonical_form, factor_multiplicities, irreducible_factors, parse_set

SCRIPT_DIR = Path(__file__).parent

SET_COMMANDS = ("closure", "factor", "is-fps", "kappa")
SCOPE_COMMANDS = ("classify", "oracle", "verify")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Parameters of one CLI run after config, environment and flags are merged"""
    command: str
    caps: Caps
    p: Optional[int] = None
    q: Optional[int] = None
    n: Optional[int] = None
    max_degree: Optional[int] = None
    seed: int = 0
    format: str = "json"
    jobs: int = 1
    inputs: List[str] = field(default_factory=list)
    output_dir: Optional[Path] = None

    def validate(self) -> None:
        """
        Raises:
            ValueError: on a missing or malformed parameter
        """
        for name in ("p", "q"):
            value = getattr(self, name)
            if value is not None and (value < 2 or not isprime(value)):
                raise ValueError(f"--{name} must be a prime, got {value}")
        needs_p = self.command != "factor"
        if needs_p and self.p is None:
            raise ValueError(f"{self.command} needs --p")
        if self.command in SCOPE_COMMANDS and self.q is None:
            raise ValueError(f"{self.command} needs --q")
        if self.command in ("oracle", "verify") and (self.n is None or self.n < 1):
            raise ValueError(f"{self.command} needs --n >= 1")
        if self.command in SET_COMMANDS and not self.inputs:
            raise ValueError(f"{self.command} needs at least one set (positional or --input FILE)")
        if self.format not in ("json", "text"):
            raise ValueError(f"--format must be json or text, got {self.format}")
        if self.jobs < 1:
            raise ValueError(f"--jobs must be positive, got {self.jobs}")

    @property
    def stem(self) -> str:
        parts = [self.command.replace("-", "_")]
        for name in ("p", "q", "n"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}{value}")
        return "-".join(parts)


class FixedPointSetToolkit:
    """Runs one subcommand and writes its report"""

    def __init__(self, config_path: Optional[str] = None, verbose: bool = False):
        self.config = load_config(config_path)
        self.setup_logging(verbose)

    def setup_logging(self, verbose: bool = False):
        """Configure logging: rotating file plus stderr console"""
        log_config = self.config.get('logging') or {}
        level_name = 'DEBUG' if verbose else (os.environ.get('FPS_LOG_LEVEL') or log_config.get('level', 'INFO'))
        level = getattr(logging, str(level_name).upper(), logging.INFO)

        formatter = logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handlers: List[logging.Handler] = []
        if log_config.get('file'):
            log_file = Path(log_config['file'])
            if not log_file.is_absolute():
                log_file = SCRIPT_DIR / log_file
            log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(RotatingFileHandler(
                log_file,
                maxBytes=int(log_config.get('max_size_mb', 10)) * 1024 * 1024,
                backupCount=int(log_config.get('backup_count', 5))
            ))

        # Diagnostics go to stderr; stdout carries the report only
        handlers.append(logging.StreamHandler(sys.stderr))

        self.logger = logging.getLogger('fps_toolkit')
        for name in ('fps_toolkit', 'fixpoint_sets'):
            target = logging.getLogger(name)
            for old in list(target.handlers):
                target.removeHandler(old)
                old.close()
            target.setLevel(level)
            target.propagate = False
            for handler in handlers:
                handler.setFormatter(formatter)
                target.addHandler(handler)

    def build_run_config(self, args: argparse.Namespace) -> RunConfig:
        caps = caps_from_config(self.config).with_overrides(
            group_cap=args.group_cap,
            dim_cap=args.dim_cap,
            kappa_max_u=args.kappa_budget,
            seed=args.seed,
        )
        inputs = list(args.sets or [])
        if args.input:
            inputs += read_input_file(args.input)
        output_dir = args.output_dir
        if output_dir is None and args.save:
            output_dir = (self.config.get('output') or {}).get('directory', 'reports')
        return RunConfig(
            command=args.command,
            caps=caps,
            p=args.p,
            q=args.q,
            n=args.n,
            max_degree=args.max_degree,
            seed=caps.seed,
            format=args.format,
            jobs=args.jobs,
            inputs=inputs,
            output_dir=Path(output_dir) if output_dir else None,
        )

    # ------------------------------------------------------------------
    # Set-level commands
    # ------------------------------------------------------------------

    def _parse(self, run: RunConfig, text: str) -> PermSet:
        return parse_set(text, run.q)

    def cmd_closure(self, run: RunConfig, text: str) -> Dict:
        X = self._parse(run, text)
        c = closure(X, run.p, run.caps)
        return {
            "set": str(X),
            "p": run.p,
            "q": c.q,
            "closure": str(c),
            "closure_size": len(c),
            "closed": c == X,
            "exact": is_exact(X, run.p, run.caps),
            "Q_order": vertex_Q(X, run.p, run.caps).order(),
        }

    def cmd_factor(self, run: RunConfig, text: str) -> Dict:
        X = self._parse(run, text)
        factors = irreducible_factors(X, run.caps)
        result = {
            "set": str(X),
            "degree": X.degree,
            "canonical_form": str(canonical_form(X, run.caps)),
            "irreducible": len(factors) == 1,
            "factors": [str(f) for f in factors],
            "multiplicities": [
                {"factor": str(f), "degree": f.degree, "exponent": a}
                for f, a in factor_multiplicities(X, run.caps)
            ],
        }
        if run.p is not None and not X.is_unit:
            try:
                fact = orbit_factorization(X, run.p, run.caps)
            except ValueError as e:
                self.logger.info(f"No orbit factorization: {e}")
            else:
                result["orbit_factorization"] = {
                    "orbits": [sorted(b) for b in fact.orbits],
                    "factors": [str(f) for f in fact.factors],
                    "q_factor_orders": fact.q_factor_orders,
                }
        return result

    def cmd_is_fps(self, run: RunConfig, text: str) -> Dict:
        return is_fixed_point_set(self._parse(run, text), run.p, run.caps, seed=run.seed).to_dict()

    def cmd_kappa(self, run: RunConfig, text: str) -> Dict:
        X = self._parse(run, text)
        trajectory, value = kappa_trajectory(X, run.p, run.caps, seed=run.seed)
        succeeded = [u for u, n_proj in trajectory if n_proj > 0]
        return {
            "set": str(X),
            "p": run.p,
            "trajectory": [{"u": u, "np": n_proj} for u, n_proj in trajectory],
            "kappa": value if isinstance(value, int) else str(value),
            "downward_closed": succeeded == list(range(1, len(succeeded) + 1)),
        }

    # ------------------------------------------------------------------
    # Scope commands
    # ------------------------------------------------------------------

    def cmd_classify(self, run: RunConfig) -> Dict:
        max_degree = run.max_degree or run.caps.oracle_max_degree
        return all_fps(run.p, run.q, max_degree, run.caps, seed=run.seed).to_dict()

    def cmd_oracle(self, run: RunConfig) -> Dict:
        return broue_oracle(run.p, run.q, run.n, run.caps, seed=run.seed, jobs=run.jobs).to_dict()

    def cmd_verify(self, run: RunConfig) -> Dict:
        classification, oracle = verify_against_oracle(run.p, run.q, run.n, run.caps,
                                                       seed=run.seed, jobs=run.jobs)
        return {
            "verdict": classification.comparison.verdict,
            "p": run.p,
            "q": run.q,
            "n": run.n,
            "comparison": classification.comparison.to_dict(),
            "classification": classification.to_dict(),
            "oracle": oracle.to_dict(),
        }

    # ------------------------------------------------------------------

    def execute(self, run: RunConfig) -> Dict:
        handler = getattr(self, "cmd_" + run.command.replace("-", "_"))
        if run.command in SET_COMMANDS:
            results = [handler(run, text) for text in run.inputs]
            return results[0] if len(results) == 1 else {"results": results}
        return handler(run)

    def save_report(self, run: RunConfig, payload: Dict) -> List[Path]:
        formats = (self.config.get('output') or {}).get('formats') or {"json": True}
        return save_reports(payload, run.output_dir, run.stem, formats, title=run.command)

    def run(self, run: RunConfig) -> int:
        """Execute a subcommand, print its report and return the exit code"""
        try:
            run.validate()
        except ValueError as e:
            self.logger.error(str(e))
            return EXIT_USAGE

        self.logger.info(f"Running {run.command} (seed {run.seed})")
        try:
            payload = self.execute(run)
        except FpsError as e:
            self.logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code
        except ValueError as e:
            self.logger.error(str(e))
            return EXIT_USAGE

        sys.stdout.write(render(payload, run.format, title=run.command))
        if run.output_dir is not None:
            self.save_report(run, payload)

        if payload.get("verdict") == "DISAGREE":
            self.logger.error("Oracle and classification disagree")
            return EXIT_MISMATCH
        return EXIT_OK


def read_input_file(path: str) -> List[str]:
    """One set per line; blank lines and lines starting with '#' are skipped."""
    with open(path, 'r', encoding='utf-8') as f:
        return [line.strip() for line in f if line.strip() and not line.lstrip().startswith('#')]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--p', type=int, help='Characteristic prime p')
    common.add_argument('--q', type=int, help='Cycle length q (inferred from the set when omitted)')
    common.add_argument('--n', type=int, help='Number of q-cycles (oracle, verify)')
    common.add_argument('--max-degree', type=int, help='Largest degree classified (default: oracle_max_degree)')
    common.add_argument('--group-cap', type=int, help='Largest group enumerated element by element')
    common.add_argument('--dim-cap', type=int, help='Largest module dimension decomposed')
    common.add_argument('--kappa-budget', type=int, help='Largest wreath exponent tested by kappa')
    common.add_argument('--seed', type=int, help='Seed for random endomorphisms (default from config)')
    common.add_argument('--format', '-f', choices=['json', 'text'], default='json', help='Report format on stdout')
    common.add_argument('--jobs', '-j', type=int, default=1, help='Worker processes for the oracle')
    common.add_argument('--input', '-i', type=str, help='File with one set per line')
    common.add_argument('--output-dir', '-o', type=str, help='Also save the report in the enabled formats here')
    common.add_argument('--save', action='store_true', help='Save the report to the configured output directory')
    common.add_argument('--config', '-c', type=str, help='Path to config file (default: config.yaml)')
    common.add_argument('--verbose', '-v', action='store_true', help='Log at DEBUG level')

    parser = argparse.ArgumentParser(
        description='Fixed point sets for conjugation on fixed-point-free q-cycle products',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='''
Examples:
  python3 fps_toolkit.py is-fps --p 2 --q 2 '{(1 2)(3 4),(1 3)(2 4),(1 4)(2 3)}'
  python3 fps_toolkit.py factor '{(1 2)(3 4)}'
  python3 fps_toolkit.py closure --p 3 --q 2 '{(1 2)(3 4)}'
  python3 fps_toolkit.py kappa --p 2 '{(1 2)}'
  python3 fps_toolkit.py classify --p 2 --q 2 --max-degree 6 --format text
  python3 fps_toolkit.py oracle --p 3 --q 3 --n 1
  python3 fps_toolkit.py verify --p 2 --q 2 --n 3 --jobs 4

Exit codes:
  0 success, 1 oracle/classification mismatch, 2 bad input,
  3 cap exceeded, 4 inconclusive decomposition, 5 theorem violation, 6 other
        '''
    )
    sub = parser.add_subparsers(dest='command', required=True)
    helps = {
        'closure': 'Closure c(X) = Fix(Q_X) of a set',
        'factor': 'Unique factorization into irreducible sets',
        'is-fps': 'Decide whether a set is a fixed point set',
        'kappa': 'Wreath-power invariant kappa with its trajectory',
        'classify': 'All fixed point sets up to a degree',
        'oracle': 'Fixed point sets of one class found from the vertex side',
        'verify': 'Compare oracle and classification at degree qn',
    }
    for name in SET_COMMANDS + SCOPE_COMMANDS:
        cmd = sub.add_parser(name, parents=[common], help=helps[name])
        if name in SET_COMMANDS:
            cmd.add_argument('sets', nargs='*', help="Sets in cycle notation, e.g. '{(1 2)(3 4)}'")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, 'sets'):
        args.sets = []

    toolkit = FixedPointSetToolkit(config_path=args.config, verbose=args.verbose)
    try:
        run = toolkit.build_run_config(args)
    except (OSError, ValueError) as e:
        toolkit.logger.error(str(e))
        return EXIT_USAGE
    return toolkit.run(run)


if __name__ == "__main__":
    sys.exit(main())
