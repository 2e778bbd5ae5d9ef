# cython: language_level=3
"""Compiled tag scanner.

Hand-written twin of :mod:`rasaeco._scan_py` with identical output for every
input; the equivalence is enforced by the test suite.  See the pure module
for the grammar description.
"""

OPEN = 0
CLOSE = 1
VOID = 2
MALFORMED = 3

KINDS = ("scenarioref", "modelref", "model", "ref", "phase", "level", "def")

cdef int _OPEN = 0
cdef int _CLOSE = 1
cdef int _VOID = 2
cdef int _MALFORMED = 3

cdef tuple _KINDS = KINDS


cdef inline bint _is_blank(Py_UCS4 c):
    return c == u' ' or c == u'\t'


cdef Py_ssize_t _find_terminator(str text, Py_ssize_t n, Py_ssize_t start):
    """First unquoted '>' after start, or -1 on newline/'<'/end of input."""
    cdef Py_ssize_t j = start
    cdef Py_UCS4 c
    while j < n:
        c = text[j]
        if c == u'>':
            return j
        if c == u'\n' or c == u'<':
            return -1
        if c == u'"':
            j += 1
            while j < n:
                c = text[j]
                if c == u'"':
                    break
                if c == u'\n':
                    return -1
                j += 1
            if j >= n:
                return -1
            j += 1
            continue
        j += 1
    return -1


cdef Py_ssize_t _parse_close(str text, Py_ssize_t n, Py_ssize_t i, list out):
    cdef Py_ssize_t j
    cdef str kind
    for kind in _KINDS:
        if text.startswith(kind, i + 2):
            j = i + 2 + len(kind)
            while j < n and _is_blank(text[j]):
                j += 1
            if j < n and text[j] == u'>':
                out.append((i, j + 1, _CLOSE, kind, None))
                return j + 1
    return -1


cdef Py_ssize_t _parse_open(str text, Py_ssize_t n, Py_ssize_t i, list out):
    cdef Py_ssize_t interior, g, k, k2, k3, v0
    cdef Py_UCS4 c
    cdef str kind, value
    cdef bint matched_name, is_void
    for kind in _KINDS:
        if not text.startswith(kind, i + 1):
            continue
        interior = i + 1 + len(kind)
        if interior >= n:
            return -1
        c = text[interior]
        if not (_is_blank(c) or c == u'/' or c == u'>'):
            continue
        g = _find_terminator(text, n, interior)
        if g == -1:
            return -1

        # Optional attribute group: one or more blanks, then name="value".
        value = None
        matched_name = False
        k3 = interior
        k2 = interior
        while k2 < g and _is_blank(text[k2]):
            k2 += 1
        if k2 > interior and k2 + 4 <= g and text.startswith(u'name', k2):
            k3 = k2 + 4
            while k3 < g and _is_blank(text[k3]):
                k3 += 1
            if k3 < g and text[k3] == u'=':
                k3 += 1
                while k3 < g and _is_blank(text[k3]):
                    k3 += 1
                if k3 < g and text[k3] == u'"':
                    k3 += 1
                    v0 = k3
                    while k3 < g and text[k3] != u'"':
                        k3 += 1
                    if k3 < g:
                        value = text[v0:k3]
                        matched_name = True
                        k3 += 1

        # Tail: optional blanks and a trailing slash, nothing else.
        k = k3 if matched_name else interior
        while k < g and _is_blank(text[k]):
            k += 1
        is_void = False
        if k < g and text[k] == u'/':
            is_void = True
            k += 1
        if k != g or not matched_name or len(value) == 0:
            out.append((i, g + 1, _MALFORMED, kind, None))
        else:
            out.append((i, g + 1, _VOID if is_void else _OPEN, kind, value))
        return g + 1
    return -1


def scan_tags(str text):
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0, consumed
    out = []
    while True:
        i = text.find(u'<', i)
        if i == -1 or i + 1 >= n:
            break
        if text[i + 1] == u'/':
            consumed = _parse_close(text, n, i, out)
        else:
            consumed = _parse_open(text, n, i, out)
        if consumed > i:
            i = consumed
        else:
            i += 1
    return out
