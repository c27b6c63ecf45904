"""Static WCAG 2.0/2.1/2.2 accessibility auditing for HTML pages."""

__version__ = "0.1.0"

from .audit import audit_html, collect_styles  # noqa: E402
from .colors import Color, contrast_ratio, parse_color, relative_luminance  # noqa: E402
from .dom import DocumentModel, ParseError, parse_html, query  # noqa: E402
from .rules import PageReport, Violation, evaluate_page, registry  # noqa: E402

__all__ = [
    "__version__", "audit_html", "collect_styles", "Color", "contrast_ratio", "parse_color",
    "relative_luminance", "DocumentModel", "ParseError", "parse_html", "query", "PageReport", "Violation",
    "evaluate_page", "registry",
]
