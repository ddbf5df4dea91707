#!/usr/bin/env python3
"""CLI for validating groupoid actions over F_p and checking their Galois correspondence."""

import argparse
import sys
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from groupoidal.config import CONFIG_FILE, Config
from groupoidal.constants import (
    EXIT_CHECK_FAILED,
    EXIT_INTERRUPTED,
    EXIT_INVALID_INPUT,
    EXIT_OK,
    get_logger,
    setup_logging,
)
from groupoidal.errors import (
    EnumerationCapExceeded,
    GroupoidalError,
    InstanceFormatError,
    InstanceValidationError,
)
from groupoidal.formats import (
    dumps_json,
    fixture_path,
    list_fixtures,
    parse_instance,
    render_report,
    report_to_json,
    validate_instance_file,
    write_report,
)
from groupoidal.formats.report import (
    render_coordinates,
    render_invariants,
    render_skew,
    render_subgroupoids,
    render_validation,
    truncate_text,
)
from groupoidal.galois import CHECKS, GaloisInstance
from groupoidal.models import CheckResult
from groupoidal.service import ALL, CheckService, resolve_checks

console = Console()
err_console = Console(stderr=True)
logger = get_logger("cli")


def resolve_instance_path(arg: str) -> Path:
    """An existing path wins; otherwise the argument names a bundled fixture."""
    path = Path(arg)
    if path.exists():
        return path
    return fixture_path(arg)


def progress_callback(current: int, total: int, result: CheckResult) -> None:
    """Show check progress on stderr."""
    percent = (current / total * 100) if total > 0 else 0
    name = truncate_text(result.name, 20)
    print(f"\r[{current}/{total}] {percent:.0f}% - {name:<20}", end="", flush=True, file=sys.stderr)


def emit_json(target: Optional[str], text: str) -> None:
    if target is None:
        return
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
        logger.debug(f"JSON записан в {target}")


def load_instance(args: argparse.Namespace, config: Config) -> GaloisInstance:
    return parse_instance(resolve_instance_path(args.instance), config, prime=args.prime)


def cmd_validate(args: argparse.Namespace, config: Config, out: Console) -> int:
    parts = validate_instance_file(resolve_instance_path(args.instance), config, prime=args.prime)
    out.print(f"[dim]{parts.path}: p = {parts.prime}, dim R = {parts.algebra.dim}, |G| = {parts.groupoid.size}[/]")
    render_validation(out, parts.reports)
    emit_json(args.json, dumps_json({
        "instance": Path(parts.path).name,
        "prime": parts.prime,
        "valid": parts.ok,
        "reports": [rep.to_dict() for rep in parts.reports],
    }))
    return EXIT_OK if parts.ok else EXIT_INVALID_INPUT


def cmd_invariants(args: argparse.Namespace, config: Config, out: Console) -> int:
    summary = CheckService(load_instance(args, config)).invariants_summary()
    render_invariants(out, summary)
    emit_json(args.json, dumps_json(summary))
    return EXIT_OK


def cmd_subgroupoids(args: argparse.Namespace, config: Config, out: Console) -> int:
    rows = CheckService(load_instance(args, config)).subgroupoid_summary()
    render_subgroupoids(out, rows)
    emit_json(args.json, dumps_json(rows))
    return EXIT_OK


def cmd_coords(args: argparse.Namespace, config: Config, out: Console) -> int:
    summary = CheckService(load_instance(args, config)).coordinates_summary(search=args.search)
    render_coordinates(out, summary)
    emit_json(args.json, dumps_json(summary))
    if summary["found"] and not summary["verified"]:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_skew(args: argparse.Namespace, config: Config, out: Console) -> int:
    summary = CheckService(load_instance(args, config)).skew_summary()
    render_skew(out, summary)
    emit_json(args.json, dumps_json(summary))
    broken = [
        c for c in summary["cosets"]
        if not (c["right_direct"] and c["left_direct"] and c["right_total"] and c["left_total"])
    ]
    return EXIT_CHECK_FAILED if broken else EXIT_OK


def cmd_check(args: argparse.Namespace, config: Config, out: Console) -> int:
    names = resolve_checks(args.name)
    instance = load_instance(args, config)

    service = CheckService(instance)
    report = service.run(names, workers=config.workers, progress_callback=progress_callback)
    print(file=sys.stderr)  # New line after progress

    render_report(out, report, show_timing=not args.no_timing)
    if args.json == "-":
        sys.stdout.write(report_to_json(report, include_timing=not args.no_timing))
    elif args.json:
        write_report(report, args.json, include_timing=not args.no_timing)

    if report.failed:
        logger.info(f"Проверки для {instance.name} завершились с ошибками")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_fixture(args: argparse.Namespace, config: Config, out: Console) -> int:
    if args.name is None:
        table = Table(title="Встроенные экземпляры", show_header=False)
        table.add_column("Имя", style="bold")
        for name in list_fixtures():
            table.add_row(name)
        out.print(table)
        return EXIT_OK

    text = fixture_path(args.name).read_text(encoding="utf-8")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out.print(f"[green]Экземпляр '{args.name}' записан в {args.out}[/]")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_config(args: argparse.Namespace, config: Config, out: Console) -> int:
    table = Table(title="Настройки", show_header=False)
    table.add_column("Параметр", style="bold")
    table.add_column("Значение", justify="right")
    table.add_row("prime", str(config.prime))
    table.add_row("max_morphisms", str(config.max_morphisms))
    table.add_row("max_sg_subsets", str(config.max_sg_subsets))
    table.add_row("workers", str(config.workers))
    table.add_row("search_coordinates", str(config.search_coordinates))
    out.print(table)

    if args.save:
        config.save(args.config_path)
        out.print(f"[green]Настройки сохранены в {args.config_path}[/]")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "subgroupoids": cmd_subgroupoids,
    "coords": cmd_coords,
    "skew": cmd_skew,
    "check": cmd_check,
    "fixture": cmd_fixture,
    "config": cmd_config,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", dest="prime", type=int, help="Модуль поля F_p (перекрывает значение из файла)")
    common.add_argument(
        "--max-morphisms",
        type=int,
        help="Предел числа морфизмов для перебора широких подгруппоидов",
    )
    common.add_argument("--max-sg-subsets", type=int, help="Предел числа подмножеств S_G для проверки φ")
    common.add_argument("--workers", type=int, help="Количество параллельных потоков")
    common.add_argument("--json", metavar="PATH", help="Записать машиночитаемый результат в файл ('-' для stdout)")
    common.add_argument("--no-timing", action="store_true", help="Не включать время выполнения в отчёт")
    common.add_argument("--config", dest="config_path", type=Path, default=CONFIG_FILE, help="Файл настроек")
    common.add_argument("--verbose", "-v", action="store_true", help="Подробный вывод для отладки")

    parser = argparse.ArgumentParser(
        prog="ggal",
        description="Действия группоидов на алгебрах над F_p и проверка соответствия Галуа",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("validate", "Проверить аксиомы группоида, алгебры и действия"),
        ("invariants", "Показать R^β, C(R), C(R)^β, J_g и S_G/T_G"),
        ("subgroupoids", "Показать широкие подгруппоиды и классы H̄"),
        ("skew", "Построить R⋆G и проверить разложения по смежным классам"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("instance", help="Файл экземпляра или имя встроенного экземпляра")

    coords = sub.add_parser("coords", parents=[common], help="Проверить или найти координаты Галуа")
    coords.add_argument("instance", help="Файл экземпляра или имя встроенного экземпляра")
    coords.add_argument("--search", action="store_true", help="Искать координаты заново вместо проверки заданных")

    check = sub.add_parser("check", parents=[common], help="Запустить проверки утверждений")
    check.add_argument("name", choices=[*CHECKS, ALL], help="Имя проверки или 'all'")
    check.add_argument("instance", help="Файл экземпляра или имя встроенного экземпляра")

    fixture = sub.add_parser("fixture", parents=[common], help="Вывести или сохранить встроенный экземпляр")
    fixture.add_argument("name", nargs="?", help="Имя экземпляра; без имени выводится список")
    fixture.add_argument("--out", help="Путь для записи")

    config = sub.add_parser("config", parents=[common], help="Показать или сохранить настройки")
    config.add_argument("--save", action="store_true", help="Сохранить текущие значения флагов")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    setup_logging(verbose=args.verbose)
    logger.info(f"Запуск команды {args.command}")

    # stdout carries only JSON when it is the target
    out = Console(quiet=True) if args.json == "-" else console
    if args.command == "check" and args.json != "-":
        out.print(Panel.fit("[bold blue]Группоидные расширения Галуа[/]", border_style="blue"))

    config = Config.load(args.config_path).with_overrides(
        prime=args.prime,
        max_morphisms=args.max_morphisms,
        max_sg_subsets=args.max_sg_subsets,
        workers=args.workers,
    )

    try:
        return COMMANDS[args.command](args, config, out)
    except InstanceValidationError as e:
        err_console.print(f"[red]Экземпляр не прошёл валидацию:[/] {e}")
        render_validation(err_console, e.reports)
        return EXIT_INVALID_INPUT
    except InstanceFormatError as e:
        err_console.print(f"[red]Ошибка в файле экземпляра:[/] {e}")
        return EXIT_INVALID_INPUT
    except EnumerationCapExceeded as e:
        logger.warning(f"Превышен предел перебора: {e}")
        err_console.print(f"[red]{e}[/]\n[yellow]Увеличьте предел флагом {e.flag}[/]")
        return EXIT_INVALID_INPUT
    except GroupoidalError as e:
        logger.error(f"Ошибка вычисления: {e}")
        err_console.print(f"[red]Ошибка:[/] {e}")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        console.print("\n\n[yellow]Отменено[/]")
        sys.exit(EXIT_INTERRUPTED)
    except Exception as e:
        logger.exception("Критическая ошибка")
        console.print(f"\n[bold red]Ошибка:[/] {e}")
        sys.exit(EXIT_CHECK_FAILED)
