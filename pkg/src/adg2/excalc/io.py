"""JSON serialization for bigraded forms.

Document layout:
    {"degree": n,
     "terms": [{"I": [...], "J": [...],
                "poly": [{"exp": [7 ints], "num": int, "den": int}, ...]}]}
"""

from __future__ import annotations

from fractions import Fraction

from .forms import BigradedForm
from .poly import NVARS, Poly


def form_to_json(a: BigradedForm) -> dict:
    terms = []
    for (I, J) in sorted(a.terms):
        poly = a.terms[(I, J)]
        entries = [
            {"exp": list(exp), "num": c.numerator, "den": c.denominator}
            for exp, c in sorted(poly.terms.items())
        ]
        terms.append({"I": list(I), "J": list(J), "poly": entries})
    return {"degree": a.degree, "terms": terms}


def form_from_json(doc: dict) -> BigradedForm:
    if not isinstance(doc, dict) or "degree" not in doc:
        raise ValueError("form document must be an object with a 'degree' field")
    out = BigradedForm(int(doc["degree"]))
    for t, term in enumerate(doc.get("terms", [])):
        try:
            I = tuple(int(i) for i in term["I"])
            J = tuple(int(j) for j in term["J"])
            coeffs: dict[tuple, Fraction] = {}
            for m in term["poly"]:
                exp = tuple(int(e) for e in m["exp"])
                if len(exp) != NVARS:
                    raise ValueError("exponent tuples must have 7 entries")
                coeffs[exp] = coeffs.get(exp, Fraction(0)) + Fraction(int(m["num"]), int(m["den"]))
            out._accumulate(I, J, Poly(coeffs))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed term /terms/{t}: {exc}") from exc
    return out
