from .instance import (
    fixture_path,
    list_fixtures,
    load_fixture,
    parse_instance,
    validate_instance_file,
    write_instance,
)
from .report import dumps_json, render_report, report_to_json, write_report

__all__ = [
    "fixture_path",
    "list_fixtures",
    "load_fixture",
    "parse_instance",
    "validate_instance_file",
    "write_instance",
    "dumps_json",
    "render_report",
    "report_to_json",
    "write_report",
]
