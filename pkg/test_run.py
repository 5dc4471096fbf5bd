"""
Smoke script: runs the main computations once and prints what they return.
"""
import sys
from pathlib import Path
from typing import Any, Callable, Dict

# Add the project root to the Python path
project_root = str(Path(__file__).parent)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.algebra.cremona import orbit_bounded
from src.algebra.diophantine import pell_solutions
from src.algebra.maxrank import classify_uniform, conjectural_uniform_bounds
from src.algebra.resolution import betti_table
from src.lattice.core import DivisorClass
from src.lattice.models import FatPointScheme
from src.oracle.verifier import OracleConfig, verify


def check_betti() -> Dict[str, Any]:
    table = betti_table(FatPointScheme.uniform(8, 205))
    print(f"Generators {table.generators}, syzygies {table.syzygies}")
    return {'generators': table.generators, 'syzygies': table.syzygies}


def check_maxrank() -> Dict[str, Any]:
    report = classify_uniform(7, 9)
    print(f"First failure for 9 x 7 points: degree {report.first_failure}")
    return {'first_failure': report.first_failure}


def check_bounds() -> Dict[str, Any]:
    bounds = conjectural_uniform_bounds(10, 6)
    print(f"r=10, m=6: kernel in [{bounds.lower}, {bounds.upper}], forced={bounds.forced}")
    return bounds.model_dump()


def check_orbit() -> Dict[str, Any]:
    orbit = orbit_bounded(DivisorClass.e(7, 0), 20)
    print(f"Orbit of e0 on 7 points: {len(orbit)} classes")
    return {'size': len(orbit)}


def check_pell() -> Dict[str, Any]:
    solutions = pell_solutions(10, 3)
    print(f"b^2 - 10 m^2 = 1: {solutions}")
    return {'solutions': solutions}


def check_oracle() -> Dict[str, Any]:
    report = verify(FatPointScheme.create([3, 2, 2, 1, 1]), OracleConfig(seed=1))
    print(f"Oracle match: {report.match} over degrees {[row.degree for row in report.rows]}")
    return {'match': report.match}


def run_checks() -> Dict[str, Any]:
    """Run all checks and display results."""
    print("🚀 Fat point toolkit smoke run 🚀\n")
    checks: Dict[str, Callable[[], Dict[str, Any]]] = {
        'betti': check_betti,
        'maxrank': check_maxrank,
        'bounds': check_bounds,
        'orbit': check_orbit,
        'pell': check_pell,
        'oracle': check_oracle,
    }
    results: Dict[str, Any] = {}
    for name, check in checks.items():
        print(f"\n=== {name} ===")
        try:
            results[name] = {'status': 'success', 'data': check()}
            print(f"✅ {name} done")
        except Exception as e:
            print(f"❌ {name} failed: {e}")
            results[name] = {'status': 'failed', 'error': str(e)}
    return results


if __name__ == "__main__":
    outcome = run_checks()
    sys.exit(0 if all(r['status'] == 'success' for r in outcome.values()) else 1)
