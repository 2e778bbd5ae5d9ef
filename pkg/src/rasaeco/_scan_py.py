"""Pure-Python tag scanner.

Reference implementation of the scanner contract shared with the compiled
extension (`rasaeco._scan_c`): find every construct of the seven known tag
kinds in a body text and classify it.

Result items are ``(start, end, form, kind, value)`` tuples with offsets into
the input, ``form`` one of OPEN/CLOSE/VOID/MALFORMED and ``value`` the raw
(undecoded) name attribute, or None for close tags and malformed constructs.

Grammar, identical in both implementations:

* a construct runs from ``<`` to the first unquoted ``>`` on the same line;
  a newline or a stray ``<`` before that terminator makes the text inert,
* close tags are ``</kind>`` with optional blanks before ``>``,
* open/void tags carry at most one attribute, ``name="..."``; a known kind
  whose attribute is missing, empty or unparsable is reported MALFORMED,
* anything else (unknown kinds, raw HTML, lone angle brackets) is not a
  construct at all and never appears in the result.
"""

from __future__ import annotations

import re

OPEN = 0
CLOSE = 1
VOID = 2
MALFORMED = 3

#: Known tag kinds, longest first so prefixes never shadow longer kinds.
KINDS = ("scenarioref", "modelref", "model", "ref", "phase", "level", "def")

_KIND_ALTERNATION = "|".join(KINDS)

_TAG_RE = re.compile(
    f"<(?:/(?P<close>{_KIND_ALTERNATION})[ \\t]*>"
    f"|(?P<kind>{_KIND_ALTERNATION})(?=[ \\t/>])"
    '(?P<attrs>(?:"[^"\\n]*"|[^<>"\\n])*)>)'
)

_ATTR_RE = re.compile(
    r'\A(?:[ \t]+name[ \t]*=[ \t]*"(?P<value>[^"\n]*)")?[ \t]*(?P<void>/)?\Z'
)

ScanHit = tuple[int, int, int, str, "str | None"]


def scan_tags(text: str) -> list[ScanHit]:
    hits: list[ScanHit] = []
    for match in _TAG_RE.finditer(text):
        close_kind = match.group("close")
        if close_kind is not None:
            hits.append((match.start(), match.end(), CLOSE, close_kind, None))
            continue
        kind = match.group("kind")
        attrs = _ATTR_RE.match(match.group("attrs"))
        if attrs is None or not attrs.group("value"):
            hits.append((match.start(), match.end(), MALFORMED, kind, None))
            continue
        form = VOID if attrs.group("void") else OPEN
        hits.append((match.start(), match.end(), form, kind, attrs.group("value")))
    return hits
