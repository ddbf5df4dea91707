"""JSON and console renderings of reports and summaries."""

import json
from pathlib import Path
from typing import Iterable, Union

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from groupoidal.constants import VECTOR_DISPLAY_MAX_LEN, get_logger
from groupoidal.models import Report, Status, ValidationReport

logger = get_logger("formats.report")

STATUS_STYLE = {
    Status.PASS: "[green]✓ pass[/]",
    Status.FAIL: "[red]✗ fail[/]",
    Status.NOT_APPLICABLE: "[yellow]– n/a[/]",
}


def truncate_text(text: str, max_len: int = VECTOR_DISPLAY_MAX_LEN) -> str:
    """Truncate text with ellipsis if too long."""
    if len(text) > max_len:
        return text[:max_len - 1] + "…"
    return text


def dumps_json(data) -> str:
    """Sorted keys, so equal payloads serialise to equal bytes."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_to_json(report: Report, include_timing: bool = True) -> str:
    return dumps_json(report.to_dict(include_timing))


def write_report(report: Report, path: Union[str, Path], include_timing: bool = True) -> None:
    Path(path).write_text(report_to_json(report, include_timing), encoding="utf-8")
    logger.debug(f"Отчёт записан в {path}")


def render_report(console: Console, report: Report, show_timing: bool = True) -> None:
    table = Table(title=f"Проверки для '{report.instance}' (p = {report.prime})")
    table.add_column("Проверка", style="bold")
    table.add_column("Статус")
    table.add_column("Итог")
    if show_timing:
        table.add_column("Время, с", justify="right")

    for check in report.checks:
        row = [check.name, STATUS_STYLE[check.status], check.summary]
        if show_timing:
            row.append(f"{check.elapsed_sec:.3f}" if check.elapsed_sec is not None else "")
        table.add_row(*row)
    console.print(table)

    counts = report.counts
    console.print(
        f"[green]Пройдено: {counts[Status.PASS]}[/]  "
        f"[red]Провалено: {counts[Status.FAIL]}[/]  "
        f"[yellow]Неприменимо: {counts[Status.NOT_APPLICABLE]}[/]"
    )


def render_validation(console: Console, reports: Iterable[ValidationReport]) -> None:
    table = Table(title="Валидация", show_header=False)
    table.add_column("Объект", style="bold")
    table.add_column("Результат")
    for rep in reports:
        table.add_row(rep.subject, "[green]✓ аксиомы выполнены[/]" if rep.ok else f"[red]✗ {len(rep.violations)} нарушений[/]")
    console.print(table)

    for rep in reports:
        for v in rep.violations:
            console.print(f"  [dim]•[/] [red]{rep.subject}[/] {v.axiom}: {v.witness}")


def render_invariants(console: Console, summary: dict) -> None:
    table = Table(title=f"Инварианты (dim R = {summary['dim_r']})", show_header=False)
    table.add_column("Объект", style="bold")
    table.add_column("dim", justify="right")
    table.add_column("Базис")
    for key, label in (("invariants", "R^β"), ("center", "C(R)"), ("center_invariants", "C(R)^β")):
        rows = summary[key]
        table.add_row(label, str(len(rows)), truncate_text(", ".join(rows)))
    for j in summary["j"]:
        table.add_row(f"J_{j['morphism']}", str(j["dim"]), truncate_text(", ".join(j["basis"]) or "0"))
    console.print(table)
    console.print(f"S_G = {{{', '.join(summary['s_g'])}}}   T_G = {{{', '.join(summary['t_g'])}}}")


def render_subgroupoids(console: Console, rows: list[dict]) -> None:
    table = Table(title=f"Широкие подгруппоиды: {len(rows)}")
    table.add_column("H", style="bold")
    table.add_column("dim θ", justify="right")
    table.add_column("dim σ", justify="right")
    table.add_column("dim γ", justify="right")
    table.add_column("S_H")
    table.add_column("Класс H̄")
    for row in rows:
        table.add_row(
            row["subgroupoid"], str(row["theta_dim"]), str(row["sigma_dim"]), str(row["gamma_dim"]),
            row["s_h"], truncate_text(" ".join(row["class"])),
        )
    console.print(table)


def render_coordinates(console: Console, summary: dict) -> None:
    if not summary["found"]:
        console.print("[yellow]Система координат Галуа отсутствует (расширение не β-Галуа)[/]")
        return
    status = "[green]проверена[/]" if summary["verified"] else "[red]не проходит проверку[/]"
    console.print(Panel.fit(
        "\n".join(f"x = {truncate_text(p['x'])}   y = {truncate_text(p['y'])}" for p in summary["pairs"]),
        title=f"Координаты Галуа ({summary['source']}), {status}",
        border_style="blue",
    ))
    if summary["nonzero_residuals"]:
        console.print(f"[red]Ненулевые невязки: {', '.join(summary['nonzero_residuals'])}[/]")


def render_skew(console: Console, summary: dict) -> None:
    console.print(f"R⋆G: размерность [bold]{summary['dim']}[/], единица {truncate_text(summary['unit'])}")
    table = Table(title="Разложения по смежным классам")
    table.add_column("H", style="bold")
    table.add_column("Правые представители")
    table.add_column("Размерности")
    table.add_column("Результат")
    for c in summary["cosets"]:
        ok = c["right_direct"] and c["left_direct"] and c["right_total"] and c["left_total"]
        table.add_row(
            c["subgroupoid"],
            " ".join(c["right_reps"]),
            "+".join(map(str, c["right_dims"])),
            "[green]✓ прямая сумма[/]" if ok else "[red]✗ нарушено[/]",
        )
    console.print(table)
