"""The 29 automated WCAG success criteria and their tunable thresholds."""

from __future__ import annotations

from dataclasses import dataclass

VERSIONS = ("2.0", "2.1", "2.2")
LEVELS = ("A", "AA", "AAA")
PRINCIPLES = ("Perceivable", "Operable", "Understandable", "Robust")
RULE_CLASSES = ("aria", "color_contrast", "html_check", "interaction")

# Every numeric threshold a rule compares against lives here.
THRESHOLDS = {
    "contrast_aa_normal": 4.5,
    "contrast_aa_large": 3.0,
    "contrast_aaa_normal": 7.0,
    "contrast_aaa_large": 4.5,
    "non_text_contrast": 3.0,
    "focus_contrast_aa": 3.0,
    "focus_contrast_aaa": 4.5,
    "target_size_aaa_px": 44.0,
    "target_size_aa_px": 24.0,
    "interaction_animation_s": 0.5,
}

# Names/ids that make an input's purpose evident for autocomplete (1.3.5).
INPUT_PURPOSE_KEYWORDS = frozenset(
    {"name", "fname", "lname", "email", "phone", "tel", "address", "city", "zip", "postal", "country",
     "cc-number", "bday"}
)


def id_key(rule_id: str) -> tuple[int, ...]:
    return tuple(int(p) for p in rule_id.split("."))


@dataclass(frozen=True)
class RuleDescriptor:
    id: str
    wcag_version: str
    level: str
    principle: str
    rule_class: str
    title: str
    fix_template: str
    needs_styles: bool = False


def _d(id_, version, level, principle, rule_class, title, fix, needs_styles=False):
    return RuleDescriptor(id_, version, level, principle, rule_class, title, fix, needs_styles)


_RULES = [
    # WCAG 2.0
    _d("1.1.1", "2.0", "A", "Perceivable", "html_check", "Non-text Content",
       "Give <{tag}> a text alternative ({how}); use alt=\"\" only for purely decorative images."),
    _d("1.3.1", "2.0", "A", "Perceivable", "html_check", "Info and Relationships",
       "{fix}"),
    _d("1.4.1", "2.0", "A", "Perceivable", "color_contrast", "Use of Color",
       "Keep an underline (or another non-color cue) on the link inside <{parent}> text.", True),
    _d("1.4.3", "2.0", "AA", "Perceivable", "color_contrast", "Contrast (Minimum)",
       "Raise the contrast of {fg} on {bg} from {ratio:.2f}:1 to at least {need}:1.", True),
    _d("1.4.4", "2.0", "AA", "Perceivable", "html_check", "Resize text",
       "Replace <{tag}> with {replacement} or CSS styling."),
    _d("1.4.6", "2.0", "AAA", "Perceivable", "color_contrast", "Contrast (Enhanced)",
       "Raise the contrast of {fg} on {bg} from {ratio:.2f}:1 to at least {need}:1.", True),
    _d("2.1.1", "2.0", "A", "Operable", "interaction", "Keyboard",
       "Use a native control (e.g. <button>) or add tabindex=\"0\" and a key handler next to {handler}."),
    _d("2.2.2", "2.0", "A", "Operable", "interaction", "Pause, Stop, Hide",
       "{fix}"),
    _d("2.4.4", "2.0", "A", "Operable", "html_check", "Link Purpose (In Context)",
       "{fix}"),
    _d("2.4.6", "2.0", "AA", "Operable", "html_check", "Headings and Labels",
       "{fix}"),
    _d("3.1.1", "2.0", "A", "Understandable", "html_check", "Language of Page",
       "Declare the page language with a valid code, e.g. <html lang=\"en\">{current}."),
    _d("3.3.2", "2.0", "A", "Understandable", "html_check", "Labels or Instructions",
       "Associate a <label for=\"{id}\"> with this <{tag}>, wrap it in a <label>, or add aria-label."),
    _d("4.1.1", "2.0", "A", "Robust", "html_check", "Parsing",
       "{fix}"),
    # WCAG 2.1
    _d("1.3.5", "2.1", "AA", "Perceivable", "aria", "Identify Input Purpose",
       "Add autocomplete=\"{token}\" to the {what} input."),
    _d("1.3.6", "2.1", "AAA", "Perceivable", "aria", "Identify Purpose",
       "{fix}"),
    _d("1.4.11", "2.1", "AA", "Perceivable", "color_contrast", "Non-text Contrast",
       "Give the <{tag}> a boundary or fill with at least 3:1 contrast against {bg} (now {ratio:.2f}:1).", True),
    _d("1.4.13", "2.1", "AA", "Perceivable", "interaction", "Content on Hover or Focus",
       "Reveal the same content on keyboard focus, e.g. add a matching '{twin}' rule.", True),
    _d("2.1.4", "2.1", "A", "Operable", "interaction", "Character Key Shortcuts",
       "Remove accesskey=\"{key}\" or let users turn off or remap the shortcut."),
    _d("2.3.3", "2.1", "AAA", "Operable", "interaction", "Animation from Interactions",
       "Wrap the {seconds:g}s motion in @media (prefers-reduced-motion: no-preference) or provide a reduce variant.",
       True),
    _d("2.5.3", "2.1", "A", "Operable", "aria", "Label in Name",
       "Start the accessible name with the visible text, e.g. aria-label=\"{visible} ...\"."),
    _d("2.5.5", "2.1", "AAA", "Operable", "interaction", "Target Size",
       "Enlarge the target to at least {need:g}x{need:g} CSS px (now {w:g}x{h:g}).", True),
    _d("4.1.3", "2.1", "AA", "Robust", "aria", "Status Messages",
       "Add role=\"status\" (or role=\"alert\" / aria-live=\"polite\") to the {what} container."),
    # WCAG 2.2
    _d("2.4.11", "2.2", "AA", "Operable", "color_contrast", "Focus Appearance (Minimum)",
       "{fix}", True),
    _d("2.4.12", "2.2", "AAA", "Operable", "color_contrast", "Focus Appearance (Enhanced)",
       "{fix}", True),
    _d("2.4.13", "2.2", "A", "Operable", "html_check", "Page Break Navigation",
       "Give the page-break marker an id (e.g. id=\"page-N\") so it can be navigated to."),
    _d("2.5.7", "2.2", "AA", "Operable", "interaction", "Dragging Movements",
       "Provide a single-pointer alternative (e.g. move up/down buttons or a click handler) for the draggable <{tag}>."),
    _d("2.5.8", "2.2", "AA", "Operable", "interaction", "Target Size (Minimum)",
       "Enlarge the target to at least {need:g}x{need:g} CSS px (now {w:g}x{h:g}).", True),
    _d("3.2.7", "2.2", "A", "Understandable", "interaction", "Visible Controls",
       "Keep the <{tag}> visible without hover, or also reveal it on focus.", True),
    _d("3.3.7", "2.2", "A", "Understandable", "aria", "Accessible Authentication",
       "Add a 'Forgot password?' link or set autocomplete=\"current-password\" so password managers can fill it."),
]

_BY_ID = {r.id: r for r in _RULES}


def registry() -> list[RuleDescriptor]:
    """All descriptors ordered by WCAG version, then numeric id."""
    return sorted(_RULES, key=lambda r: (r.wcag_version, id_key(r.id)))


def descriptor(rule_id: str) -> RuleDescriptor:
    return _BY_ID[rule_id]


def rule_ids() -> list[str]:
    return [r.id for r in registry()]
