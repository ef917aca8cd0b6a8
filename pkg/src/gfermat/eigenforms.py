"""Hecke eigenvalue data: file schema, validation, derivation from an elliptic curve, remote fetch."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema
import mpmath

from .cyclotomic import build_field, split_prime
from .kernels import field_tables, count_points, SingularCurveError

LEVEL_TAGS = ("2*O_K", "2*p", "2*B", "2*B^2")
VARIANTS = ("K", "Kprime")

EIGENFORM_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["label", "base_field", "level", "hecke_poly", "eigenvalues"],
    "properties": {
        "label": {"type": "string", "minLength": 1},
        "base_field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["p", "variant"],
            "properties": {
                "p": {"type": "integer", "minimum": 3},
                "variant": {"enum": list(VARIANTS)},
            },
        },
        "level": {"enum": list(LEVEL_TAGS)},
        "hecke_poly": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
        "eigenvalues": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["q", "index", "a"],
                "properties": {
                    "q": {"type": "integer", "minimum": 2},
                    "index": {"type": "integer", "minimum": 0},
                    "a": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                },
            },
        },
    },
}


class EigenformDataError(ValueError):
    """Schema violation, Hasse violation or missing eigenvalues."""


class FetchError(RuntimeError):
    """A remote fetch failed; ``retriable`` says whether trying again may help."""

    def __init__(self, message, retriable=True):
        super().__init__(message)
        self.retriable = retriable


@dataclass
class EigenformData:
    label: str
    p: int
    variant: str
    level: str
    hecke_poly: tuple
    eigenvalues: dict = dc_field(default_factory=dict)

    @property
    def field(self):
        return build_field(self.p, subfield=self.variant == "Kprime")

    @property
    def hecke_degree(self):
        return len(self.hecke_poly) - 1

    @property
    def rational(self):
        return self.hecke_degree == 1

    def eigenvalue(self, q, index):
        try:
            return self.eigenvalues[(q, index)]
        except KeyError:
            raise EigenformDataError(f"missing eigenvalue for q={q}, index={index}") from None

    def rational_eigenvalue(self, q, index):
        """a_q as an integer when the Hecke field is Q (t = -hecke_poly[0])."""
        a = self.eigenvalue(q, index)
        root = -self.hecke_poly[0]
        return sum(c * root**i for i, c in enumerate(a))

    def primes_present(self):
        return sorted({q for q, _ in self.eigenvalues})

    def check_complete(self, qs):
        F = self.field
        for q in qs:
            for P in split_prime(F, q):
                if (q, P.factor_index) not in self.eigenvalues:
                    raise EigenformDataError(f"missing eigenvalue for q={q}, index={P.factor_index}")

    def to_json(self):
        return {
            "label": self.label,
            "base_field": {"p": self.p, "variant": self.variant},
            "level": self.level,
            "hecke_poly": list(self.hecke_poly),
            "eigenvalues": [
                {"q": q, "index": i, "a": list(a)} for (q, i), a in sorted(self.eigenvalues.items())
            ],
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"


def hecke_embeddings(poly, dps=50):
    """Complex roots of the Hecke polynomial."""
    if len(poly) == 2:
        return [mpmath.mpf(-poly[0]) / poly[1]]
    with mpmath.workdps(dps):
        return mpmath.polyroots(list(reversed(poly)), maxsteps=200, extraprec=4 * dps)


def satisfies_hasse(a, norm_q, poly, roots=None):
    """|a(t)| <= 2 sqrt(N q) under every embedding of the Hecke field."""
    if len(poly) == 2:
        val = sum(c * (-poly[0]) ** i for i, c in enumerate(a))
        return val * val <= 4 * norm_q
    roots = roots if roots is not None else hecke_embeddings(poly)
    bound = 4 * norm_q
    for r in roots:
        with mpmath.workdps(50):
            v = mpmath.fsum(c * r**i for i, c in enumerate(a))
            if abs(v) ** 2 > bound * (1 + mpmath.mpf(10) ** -30):
                return False
    return True


def validate(data, required_qs=()):
    F = data.field
    poly = data.hecke_poly
    if poly[-1] != 1:
        raise EigenformDataError("hecke_poly must be monic")
    roots = None if len(poly) == 2 else hecke_embeddings(poly)
    norms = {}
    for (q, idx), a in data.eigenvalues.items():
        if len(a) > data.hecke_degree:
            raise EigenformDataError(f"eigenvalue at q={q}, index={idx} has too many coordinates")
        if q not in norms:
            if F.conductor % q == 0:
                norms[q] = {0: q}
            else:
                norms[q] = {P.factor_index: P.norm for P in split_prime(F, q)}
        if idx not in norms[q]:
            raise EigenformDataError(f"index {idx} out of range for q={q}")
        if not satisfies_hasse(a, norms[q][idx], poly, roots):
            raise EigenformDataError(f"Hasse bound violated at q={q}, index={idx}")
    data.check_complete(required_qs)
    return data


def from_json(obj, required_qs=()):
    try:
        jsonschema.validate(obj, EIGENFORM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise EigenformDataError(f"schema violation at {where}: {exc.message}") from None
    bf = obj["base_field"]
    evs = {}
    for e in obj["eigenvalues"]:
        key = (e["q"], e["index"])
        if key in evs:
            raise EigenformDataError(f"duplicate eigenvalue for q={key[0]}, index={key[1]}")
        evs[key] = tuple(e["a"])
    data = EigenformData(obj["label"], bf["p"], bf["variant"], obj["level"], tuple(obj["hecke_poly"]), evs)
    return validate(data, required_qs)


def ingest_eigenform(path, required_qs=()):
    """Load and validate an eigenform file."""
    path = Path(path)
    if path.is_dir():
        raise EigenformDataError(f"{path} is a directory")
    if not path.exists() and path.with_suffix(".json").exists():
        path = path.with_suffix(".json")
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError:
        raise EigenformDataError(f"eigenform file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise EigenformDataError(f"{path}: not valid JSON ({exc})") from None
    return from_json(obj, required_qs)


def eigenvalues_from_curve(ainvs, p, variant, qs, label="curve", level="2*B"):
    """Rational eigenform attached to an elliptic curve over Q, viewed over the base field.

    a_q = N(q) + 1 - #E(F_q) for every prime q above each requested rational prime.
    """
    F = build_field(p, subfield=variant == "Kprime")
    evs = {}
    for q in qs:
        for P in split_prime(F, q):
            t = field_tables(q, P.local_factor)
            coeffs = tuple(int(c) % q for c in ainvs)
            try:
                n_pts = count_points(t, coeffs)
            except SingularCurveError:
                raise EigenformDataError(f"bad reduction at q={q}") from None
            evs[(q, P.factor_index)] = (P.norm + 1 - n_pts,)
    return EigenformData(label, p, variant, level, (0, 1), evs)


CURVE_26B1 = (1, -1, 1, -3, 3)


def _poly_from_string(s, var):
    """Parse a polynomial such as 'x^2 - 2*x + 3' into constant-first integer coefficients."""
    import sympy

    x = sympy.Symbol(var)
    poly = sympy.Poly(sympy.sympify(s.replace("^", "**"), locals={var: x}), x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return coeffs


def convert_remote_record(record, p, variant):
    """Map a remote record to the local schema.

    The record must carry ``hecke_polynomial`` (string in x), ``hecke_eigenvalues``
    (strings in e) and ``primes`` ([q, index] pairs in canonical order, one per
    eigenvalue).
    """
    try:
        poly = _poly_from_string(record["hecke_polynomial"], "x")
        evs = [_poly_from_string(str(v), "e") for v in record["hecke_eigenvalues"]]
        primes = record["primes"]
        level = record.get("level", "2*O_K")
        label = record["label"]
    except (KeyError, TypeError) as exc:
        raise EigenformDataError(f"remote record missing field {exc}") from None
    if len(primes) != len(evs):
        raise EigenformDataError("remote record has mismatched primes and eigenvalues")
    obj = {
        "label": label,
        "base_field": {"p": p, "variant": variant},
        "level": level,
        "hecke_poly": poly,
        "eigenvalues": [{"q": int(q), "index": int(i), "a": a or [0]} for (q, i), a in zip(primes, evs)],
    }
    return obj


def fetch_eigenform(label, endpoint, p, variant="K", client=None, timeout=30.0):
    """Fetch a record from a JSON endpoint and return it converted to the local schema."""
    import httpx

    own = client is None
    client = client or httpx.Client(timeout=timeout)
    try:
        resp = client.get(endpoint, params={"label": label, "_format": "json"})
    except httpx.TransportError as exc:
        raise FetchError(f"network failure contacting {endpoint}: {exc}", retriable=True) from None
    finally:
        if own:
            client.close()
    if resp.status_code >= 500 or resp.status_code == 429:
        raise FetchError(f"{endpoint} answered {resp.status_code}", retriable=True)
    if resp.status_code != 200:
        raise FetchError(f"{endpoint} answered {resp.status_code}", retriable=False)
    try:
        payload = resp.json()
    except ValueError:
        raise FetchError("endpoint did not return JSON", retriable=False) from None
    records = payload.get("data", [payload]) if isinstance(payload, dict) else payload
    records = [r for r in records if isinstance(r, dict) and r.get("label") == label]
    if not records:
        raise FetchError(f"label {label!r} not found at {endpoint}", retriable=False)
    return convert_remote_record(records[0], p, variant)


def write_eigenform(obj, path):
    if isinstance(obj, EigenformData):
        text = obj.dumps()
    else:
        text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    Path(path).write_text(text)
    return path


def hasse_bound(norm_q):
    return 2 * math.sqrt(norm_q)
