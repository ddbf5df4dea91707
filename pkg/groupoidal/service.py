"""Check orchestration and summary views over a built Galois instance."""

import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Optional, Sequence

from groupoidal.action import t_set
from groupoidal.constants import DEFAULT_CHECK_WORKERS, get_logger
from groupoidal.errors import EnumerationCapExceeded, GroupoidalError
from groupoidal.galois import CHECKS, GaloisInstance, find_coordinates, verify_coordinates
from groupoidal.groupoid import members
from groupoidal.models import CheckResult, Report, Status
from groupoidal.skew import coset_decomposition_check

logger = get_logger("service")

ALL = "all"


def resolve_checks(name: str) -> list[str]:
    """Expand ``all`` into the ordered check list; reject unknown names."""
    if name == ALL:
        return list(CHECKS)
    if name not in CHECKS:
        raise GroupoidalError(f"unknown check {name!r}; expected one of: {', '.join(CHECKS)}, {ALL}")
    return [name]


class CheckService:
    def __init__(self, instance: GaloisInstance):
        self.instance = instance

    def run(
        self,
        names: Sequence[str],
        workers: int = DEFAULT_CHECK_WORKERS,
        progress_callback: Optional[Callable[[int, int, CheckResult], None]] = None,
    ) -> Report:
        inst = self.instance
        logger.info(f"Запуск {len(names)} проверок для {inst.name} ({workers} потоков)")
        results = self._run_parallel(list(names), workers, progress_callback)

        failed = [r.name for r in results if r.failed]
        if failed:
            logger.warning(f"Проверки не пройдены: {', '.join(failed)}")
        else:
            logger.info("Все проверки пройдены или неприменимы")
        return Report(instance=inst.name, prime=inst.p, checks=results)

    def _timed(self, name: str) -> CheckResult:
        start = time.perf_counter()
        result = CHECKS[name](self.instance)
        result.elapsed_sec = time.perf_counter() - start
        return result

    def _run_parallel(
        self,
        names: list[str],
        workers: int,
        progress_callback: Optional[Callable[[int, int, CheckResult], None]],
    ) -> list[CheckResult]:
        """Run checks in a thread pool; report order follows ``names``."""
        results: list[CheckResult] = []
        completed = 0

        with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
            future_to_name = {executor.submit(self._timed, name): name for name in names}

            for future in as_completed(future_to_name):
                name = future_to_name[future]
                try:
                    result = future.result()
                except EnumerationCapExceeded:
                    raise
                except Exception as e:
                    logger.warning(f"Ошибка в проверке '{name}': {e}")
                    result = CheckResult(name, Status.FAIL, f"ошибка: {e}", {"error": type(e).__name__})

                results.append(result)
                completed += 1

                if progress_callback:
                    progress_callback(completed, len(names), result)

        # Restore requested order
        order = {name: i for i, name in enumerate(names)}
        results.sort(key=lambda r: order[r.name])
        return results

    def invariants_summary(self) -> dict:
        """R^β, C(R), C(R)^β, the J_g table and S_G/T_G."""
        inst = self.instance
        g, a = inst.groupoid, inst.algebra
        full = inst.full_mask
        return {
            "dim_r": a.dim,
            "invariants": _rows(inst, inst.invariants.basis),
            "center": _rows(inst, inst.center.basis),
            "center_invariants": _rows(inst, inst.center_invariants.basis),
            "j": [
                {"morphism": g.names[m], "dim": j.dim, "basis": _rows(inst, j.space.basis)}
                for m, j in enumerate(inst.action.j_table)
            ],
            "s_g": [g.names[m] for m in members(inst.s_sets[full])],
            "t_g": [g.names[m] for m in members(t_set(inst.action, full))],
        }

    def subgroupoid_summary(self) -> list[dict]:
        """Wide subgroupoids with θ/σ/γ dimensions and their classes."""
        inst = self.instance
        g = inst.groupoid
        return [
            {
                "subgroupoid": h.label,
                "theta_dim": inst.theta_table[h.mask].dim,
                "sigma_dim": inst.sigma_table[h.mask].dim,
                "gamma_dim": inst.gamma_table[h.mask].dim,
                "s_h": g.label(inst.s_sets[h.mask]),
                "class": [g.label(m) for m in inst.class_table[h.mask]],
            }
            for h in inst.wide
        ]

    def coordinates_summary(self, search: bool = False) -> dict:
        """Verify the coordinates given in the instance file, or search when asked or none were given."""
        inst = self.instance
        if search:
            coords, source = find_coordinates(inst.action), "search"
        elif inst.supplied_coordinates is not None:
            coords, source = inst.supplied_coordinates, "file"
        else:
            coords, source = inst.coordinates, inst.coordinates_source
        if coords is None:
            return {"found": False, "source": None, "pairs": []}
        ok, residuals = verify_coordinates(inst.action, coords)
        if not ok:
            logger.warning(f"Координаты ({source}) не проходят проверку")
        return {
            "found": True,
            "source": source,
            "verified": ok,
            "pairs": [
                {"x": inst.algebra.format(x), "y": inst.algebra.format(y)} for x, y in coords.pairs
            ],
            "nonzero_residuals": [inst.groupoid.names[m] for m, r in residuals.items() if r.any()],
        }

    def skew_summary(self) -> dict:
        """R⋆G dimension, unit and the coset decomposition for every wide H."""
        inst = self.instance
        skew = inst.skew
        return {
            "dim": skew.dim,
            "unit": skew.algebra.format(skew.algebra.unit),
            "blocks": {inst.groupoid.names[m]: len(skew.block_range(m)) for m in skew.offsets},
            "cosets": [coset_decomposition_check(skew, h).to_dict() for h in inst.wide],
        }


def _rows(inst: GaloisInstance, basis) -> list[str]:
    return [inst.algebra.format(row) for row in basis]
