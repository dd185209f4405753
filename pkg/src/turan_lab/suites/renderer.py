"""Markdown rendering of lab reports through jinja2 templates."""

import logging
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, select_autoescape

from .report import LabReport

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).parent / "templates"


class ReportRenderer:
    """Render reports with the packaged templates (or a custom directory)."""

    def __init__(self, templates_dir: Path | None = None):
        self.templates_dir = templates_dir or TEMPLATES_DIR
        self.jinja_env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            autoescape=select_autoescape(["html", "xml"]),
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def render_markdown(self, report: LabReport, template: str = "report.md.j2") -> str:
        try:
            return self.jinja_env.get_template(template).render(
                report=report,
                summary=report.summary(),
                failures=report.failures,
            )
        except Exception as e:
            logger.error(f"Failed to render {template}: {e}")
            raise
