"""
Fat Point Resolution Toolkit

Command-line front end: Hilbert functions, Betti tables and maximal rank
analysis of fat point ideals in P^2, Cremona orbits, the number theory behind
the r >= 10 bounds, and the GF(p) oracle.
"""
import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field
from pydantic import ValidationError as ConfigError

from config.settings import settings
from src import __version__
from src.algebra.cohomology import hilbert_function, profile
from src.algebra.cremona import orbit_bounded, orbit_exceptions
from src.algebra.diophantine import odd_convergents, pell_solutions
from src.algebra.maxrank import (
    abnormal_witness,
    classify,
    conjectural_uniform_bounds,
    forcing_scan,
    generator_bounds,
    umrp_status,
)
from src.algebra.resolution import betti_table
from src.lattice.core import DivisorClass
from src.lattice.models import FatPointScheme
from src.oracle.verifier import OracleConfig, oracle_betti, verify
from src.utils import (
    ResolutionError,
    TheoryGapError,
    ValidationError,
    VerificationError,
    configure_logging,
    get_logger,
    parse_degree_range,
    parse_divisor_class,
    parse_multiplicities,
    parse_order,
)
from src.utils.cache import ResultCache

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFICATION = 2
EXIT_USAGE = 64
EXIT_INTERNAL = 70


class UsageError(Exception):
    """Raised instead of exiting when argparse rejects the command line."""

    def __init__(self, message: str, usage: str):
        super().__init__(message)
        self.usage = usage


class CliParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message, self.format_usage())


def canonical(obj: Any) -> Any:
    """JSON-ready copy with string keys, so output survives a parse/dump round trip."""
    if isinstance(obj, BaseModel):
        return canonical(obj.model_dump(mode='json'))
    if hasattr(obj, 'to_json') and callable(obj.to_json):
        return canonical(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return obj


class OutputEnvelope(BaseModel):
    command: str
    inputs: Dict[str, Any]
    result: Dict[str, Any]
    conjectural: bool = False
    version: str = __version__
    timing: Dict[str, float] = Field(default_factory=dict, description="Wall time, only with --timing")


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _within(table: Dict[str, Any], degrees: Optional[str]) -> Dict[str, Any]:
    """Entries of a degree-keyed table inside the --degrees range."""
    if not degrees:
        return table
    low, high = parse_degree_range(degrees)
    return {k: v for k, v in table.items() if low <= int(k) <= high}


def _scheme(args: argparse.Namespace) -> FatPointScheme:
    if args.mults:
        return FatPointScheme.create(parse_multiplicities(args.mults), args.order)
    if args.r is None or args.m is None:
        raise ValidationError("Give either -r and -m or --mults")
    return FatPointScheme.uniform(args.r, args.m, args.order)


class FatPointsApp:
    """Dispatches subcommands and wraps their results in the output envelope."""

    def __init__(self, cache: Optional[ResultCache] = None):
        self.cache = cache or ResultCache(version=__version__, enabled=False)
        self.handlers: Dict[str, Callable[[argparse.Namespace], Dict[str, Any]]] = {
            'hilbert': self.hilbert,
            'betti': self.betti,
            'maxrank': self.maxrank,
            'scan': self.scan,
            'orbit': self.orbit,
            'pell': self.pell,
            'convergents': self.convergents,
            'verify': self.verify,
        }

    def hilbert(self, args: argparse.Namespace) -> Dict[str, Any]:
        Z = _scheme(args)
        prof = profile(Z)
        result = canonical(prof)
        if args.degrees:
            low, high = parse_degree_range(args.degrees)
            result['values'] = {str(d): hilbert_function(Z, d) for d in range(low, high + 1)}
        return result

    def betti(self, args: argparse.Namespace) -> Dict[str, Any]:
        Z = _scheme(args)
        prof = profile(Z)
        try:
            table = betti_table(Z, prof)
        except TheoryGapError as e:
            if not args.oracle:
                raise
            logger.warning(f"{e}; falling back to oracle ranks")
            table = oracle_betti(Z, OracleConfig(), prof)
        result = canonical(table)
        result['generators'] = _within(result['generators'], args.degrees)
        result['syzygies'] = _within(result['syzygies'], args.degrees)
        if args.bounds:
            result['generator_bounds'] = _within(canonical(generator_bounds(Z, prof)), args.degrees)
        return result

    def maxrank(self, args: argparse.Namespace) -> Dict[str, Any]:
        Z = _scheme(args)
        result = canonical(classify(Z))
        result['per_degree'] = _within(result['per_degree'], args.degrees)
        if Z.is_uniform and Z.r >= 10:
            result['bounds'] = canonical(conjectural_uniform_bounds(Z.r, Z.multiplicities[0]))
        if args.witness:
            witness = abnormal_witness(Z.r)
            result['abnormal_witness'] = canonical(witness) if witness is not None else None
        return result

    def scan(self, args: argparse.Namespace) -> Dict[str, Any]:
        m_max = args.m_max or settings.SCAN_M_MAX
        rows: List[Dict[str, Any]] = []
        for r in args.r or []:
            if r <= 9:
                rows.append({'kind': 'umrp', **canonical(umrp_status(r, m_max, args.order))})
            else:
                rows.append({'kind': 'forcing', **canonical(forcing_scan(r, m_max))})
        if not rows:
            raise ValidationError("scan needs at least one -r")
        return {'m_max': m_max, 'scans': rows}

    def orbit(self, args: argparse.Namespace) -> Dict[str, Any]:
        if args.seed:
            d, mults = parse_divisor_class(args.seed)
            G = DivisorClass(d, mults)
        elif args.r is not None:
            G = DivisorClass.e(args.r, 0)
        else:
            raise ValidationError("orbit needs -r or --seed")
        bound = args.bound if args.bound is not None else settings.ORBIT_BOUND
        result = canonical(orbit_bounded(G, bound, certify=args.certify, max_classes=args.max_classes))
        if args.certify:
            result['exceptions'] = canonical(orbit_exceptions(G, bound, max_classes=args.max_classes))
        return result

    def pell(self, args: argparse.Namespace) -> Dict[str, Any]:
        solutions = pell_solutions(args.r, args.count)
        return {'r': args.r, 'solutions': [list(pair) for pair in solutions]}

    def convergents(self, args: argparse.Namespace) -> Dict[str, Any]:
        pairs = odd_convergents(args.c, args.a, args.count)
        r = (args.c * args.a) ** 2 + 4 * args.c ** 2
        return {'c': args.c, 'a': args.a, 'r': r, 'convergents': [list(pair) for pair in pairs]}

    def verify(self, args: argparse.Namespace) -> Dict[str, Any]:
        Z = _scheme(args)
        overrides = {
            'prime': args.prime,
            'seed': args.seed,
            'max_degree': args.max_degree,
            'resample_limit': args.resample_limit,
        }
        cfg = OracleConfig(**{k: v for k, v in overrides.items() if v is not None})
        return canonical(verify(Z, cfg))

    def run(self, command: str, args: argparse.Namespace) -> OutputEnvelope:
        """Run a subcommand, consulting the cache first, and build the envelope."""
        inputs = _inputs(command, args)
        logger.info(f"Running {command} with {inputs}")
        start = time.perf_counter()
        result = self.cache.get(command, inputs)
        if result is None:
            result = self.handlers[command](args)
            self.cache.set(command, inputs, result)
        elapsed = time.perf_counter() - start
        logger.info(f"Finished {command} in {elapsed:.3f}s")
        return OutputEnvelope(
            command=command,
            inputs=inputs,
            result=result,
            conjectural=_conjectural(result),
            timing={'seconds': round(elapsed, 6)} if getattr(args, 'timing', False) else {},
        )


def _conjectural(result: Any) -> bool:
    if isinstance(result, dict):
        return bool(result.get('conjectural')) or any(_conjectural(v) for v in result.values())
    if isinstance(result, list):
        return any(_conjectural(v) for v in result)
    return False


def _inputs(command: str, args: argparse.Namespace) -> Dict[str, Any]:
    skip = {'command', 'json', 'csv', 'cache', 'no_cache', 'log_level', 'output', 'timing'}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def to_csv(command: str, result: Dict[str, Any]) -> str:
    """Flatten scan and verify results into CSV rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    if command == 'scan':
        writer.writerow(['kind', 'r', 'm', 'degree', 'R', 'S', 'label'])
        for scan in result['scans']:
            if scan['kind'] == 'umrp':
                for f in scan['failures']:
                    writer.writerow(['umrp', scan['r'], f['m'], f['degree'], f['R'], f['S'], f['label']])
            else:
                for m in scan['forced']:
                    writer.writerow(['forcing', scan['r'], m, '', '', '', 'forced'])
    elif command == 'verify':
        writer.writerow(['degree', 'closed_dim', 'oracle_dim', 'closed_ker', 'oracle_ker',
                         'closed_nu_next', 'oracle_nu_next', 'match'])
        for row in result['rows']:
            closed, oracle = row['closed'], row['oracle']
            writer.writerow([row['degree'], closed['dim'], oracle['dim'], closed['ker'], oracle['ker'],
                             closed['nu_next'], oracle['nu_next'], row['match']])
    else:
        raise ValidationError(f"CSV output is only available for scan and verify, not {command}")
    return buffer.getvalue()


def _add_scheme_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('-r', type=int, help='Number of points')
    parser.add_argument('-m', type=int, help='Uniform multiplicity')
    parser.add_argument('--mults', help='Comma separated multiplicities m1,...,mr')


def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument('--json', action='store_true', help='Emit JSON (default)')
    fmt.add_argument('--csv', action='store_true', help='Emit CSV (scan and verify only)')
    common.add_argument('--cache', metavar='PATH', help='Result cache file')
    common.add_argument('--no-cache', action='store_true', help='Disable the result cache')
    common.add_argument('--log-level', help='Logging level')
    common.add_argument('--output', '-o', help='Write the output to a file instead of stdout')
    common.add_argument('--timing', action='store_true', help='Report wall time in the envelope')
    common.add_argument('--order', type=parse_order, default=settings.CUBIC_ORDER,
                        help="Order l of -K on the cubic for r = 9, or 'inf'")

    parser = CliParser(description='Fat point resolution toolkit')
    sub = parser.add_subparsers(dest='command', parser_class=CliParser)
    sub.required = True

    hilbert = sub.add_parser('hilbert', parents=[common], help='Hilbert function, alpha, beta, tau')
    _add_scheme_args(hilbert)
    hilbert.add_argument('--degrees', help='Degree range a..b')

    betti = sub.add_parser('betti', parents=[common], help='Graded Betti numbers')
    _add_scheme_args(betti)
    betti.add_argument('--oracle', action='store_true', help='Use oracle ranks when no closed form applies')
    betti.add_argument('--bounds', action='store_true', help='Also report bounds on the generators')
    betti.add_argument('--degrees', help='Only report degrees in the range a..b')

    maxrank = sub.add_parser('maxrank', parents=[common], help='Maximal rank of the multiplication maps')
    _add_scheme_args(maxrank)
    maxrank.add_argument('--witness', action='store_true', help='Include the abnormal class witness')
    maxrank.add_argument('--degrees', help='Only report degrees in the range a..b')

    scan = sub.add_parser('scan', parents=[common], help='Scan uniform multiplicities')
    scan.add_argument('-r', type=int, action='append', help='Number of points (repeatable)')
    scan.add_argument('--m-max', type=int, help='Largest multiplicity')

    orbit = sub.add_parser('orbit', parents=[common], help='Weyl orbit of a nef class')
    orbit.add_argument('-r', type=int, help='Number of points (seed defaults to e0)')
    orbit.add_argument('--seed', help="Seed class 'd;m1,...,mr' or JSON")
    orbit.add_argument('--bound', type=int, help='Largest degree')
    orbit.add_argument('--certify', action='store_true', help='Attach maximal rank certificates')
    orbit.add_argument('--max-classes', type=int, help='Stop once the orbit has more classes than this')

    pell = sub.add_parser('pell', parents=[common], help='Solutions of b^2 - r*m^2 = 1')
    pell.add_argument('-r', type=int, required=True)
    pell.add_argument('--count', type=int, default=5)

    convergents = sub.add_parser('convergents', parents=[common], help='Odd convergents of sqrt(r)')
    convergents.add_argument('-c', type=int, required=True)
    convergents.add_argument('-a', type=int, required=True)
    convergents.add_argument('--count', type=int, default=3)

    verify_cmd = sub.add_parser('verify', parents=[common], help='Compare with the GF(p) oracle')
    _add_scheme_args(verify_cmd)
    verify_cmd.add_argument('--seed', type=int, help='Random seed for the points')
    verify_cmd.add_argument('--prime', type=int)
    verify_cmd.add_argument('--max-degree', type=int)
    verify_cmd.add_argument('--resample-limit', type=int)
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout: Any = None, stderr: Any = None) -> int:
    """Run the command line and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(e.usage)
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    configure_logging(log_level=args.log_level)

    cache = ResultCache(
        path=args.cache,
        version=__version__,
        enabled=settings.CACHE_ENABLED and not args.no_cache,
    )
    app = FatPointsApp(cache)
    try:
        envelope = app.run(args.command, args)
        text = to_csv(args.command, envelope.result) if args.csv else dumps(canonical(envelope)) + '\n'
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        stderr.write(f"verification failed: {e}\n")
        return EXIT_VERIFICATION
    except (ValidationError, ConfigError) as e:
        logger.error(f"{args.command} rejected its input: {e}")
        stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN
    except ResolutionError as e:
        logger.error(f"Internal invariant violated: {e}")
        stderr.write(f"internal error: {e}\n")
        return EXIT_INTERNAL

    if args.output:
        with open(args.output, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info(f"Output saved to {args.output}")
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
