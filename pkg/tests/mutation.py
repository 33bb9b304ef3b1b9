"""Single-coefficient mutations of a certificate document."""
import copy
import re

from neron.certificate import FORMAT
from neron.polyring import FieldSpec, ParseError, Poly, Ring, VarBlock, format_poly, parse_poly

NUMBER = re.compile(r"(?<![\w^@.])(\d+)(?=\*|\b)")
SKIP = ("kind", "name", "vars", "yvars", "modulus", "order", "point")


def doc_ring(doc):
    assert doc["format"] == FORMAT
    blocks = [VarBlock(f"v{i}", 1, role, (n,)) for i, (n, role) in enumerate(doc["variables"])]
    return Ring(FieldSpec.parse(doc["field"]), blocks)


def poly_mutations(text, ring):
    """Every polynomial obtained by adding 1 to one coefficient (implicit ones included)."""
    f = parse_poly(text, ring)
    one = ring.field.coerce(1)
    for e, c in sorted(f.terms.items()):
        terms = dict(f.terms)
        terms[e] = ring.field.norm(c + one)
        yield format_poly(Poly.from_terms(ring, list(terms.items())))
    if f.is_zero():
        yield "1"


def text_mutations(text, ring):
    if "@" not in text:
        try:
            yield from poly_mutations(text, ring)
            return
        except ParseError:
            pass
    for m in NUMBER.finditer(text):
        yield text[:m.start()] + str(int(m.group(1)) + 1) + text[m.end():]


def _strings(v, path):
    if isinstance(v, str):
        yield path, v
    elif isinstance(v, list):
        for i, x in enumerate(v):
            yield from _strings(x, path + [i])
    elif isinstance(v, dict):
        for k, x in v.items():
            yield from _strings(x, path + [k])


def _set(d, path, val):
    for p in path[:-1]:
        d = d[p]
    d[path[-1]] = val


def mutations(doc):
    """Yield ``(where, mutated_doc)`` for every single-coefficient mutation."""
    ring = doc_ring(doc)
    for name, text in doc["objects"].items():
        for new in poly_mutations(text, ring):
            d2 = copy.deepcopy(doc)
            d2["objects"][name] = new
            yield f"object {name}", d2
    for ci, c in enumerate(doc["claims"]):
        body = {k: v for k, v in c.items() if k not in SKIP}
        for path, text in _strings(body, []):
            for new in text_mutations(text, ring):
                d2 = copy.deepcopy(doc)
                _set(d2["claims"][ci], path, new)
                yield f"claim {c['name']} {path}", d2
