"""Model files: strict JSON with exact rational coefficients.

Grammar (all keys required unless marked optional)::

    {
      "schema_version": 1,
      "name": "<text>",
      "dimension": <int>,
      "d": [ [ ["<p/q>", i, j], ... ],   # d e^1
             ... ],                        # one list per generator, i < j
      "J": [ ["<p/q>", ...], ... ],        # optional; J[i][j] = e_i coefficient of J e_j
      "omega": [ ["<p/q>", i, j], ... ],   # optional
      "flags": { "nilpotent": bool, "completely_solvable": bool,
                 "surface": bool, "provenance": "<text>" }   # every flag optional
    }

Unknown keys anywhere are rejected.
"""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ModelError
from .exterior import Form
from .lie_model import AlmostComplexStructure, LieAlgebraModel, SymplecticForm, validate_jacobi

SCHEMA_VERSION = 1
TOP_KEYS = {"schema_version", "name", "dimension", "d", "J", "omega", "flags"}
REQUIRED = {"schema_version", "name", "dimension", "d"}
FLAG_TYPES = {"nilpotent": bool, "completely_solvable": bool, "surface": bool,
              "provenance": str}


@dataclass
class ModelFile:
    model: LieAlgebraModel
    J: object = None  # AlmostComplexStructure or None
    omega: object = None  # Form or None
    flags: dict = field(default_factory=dict)
    source: str = ""

    @property
    def name(self):
        return self.model.name

    def symplectic_form(self):
        if self.omega is None:
            return None
        return SymplecticForm(self.model, self.omega)

    def same_model(self, other):
        return (self.model == other.model and self.omega == other.omega
                and (self.J.J if self.J else None) == (other.J.J if other.J else None)
                and self.flags == other.flags)


def _rational(text, where):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ModelError(f"{where}: coefficient must be a \"p/q\" string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"{where}: malformed coefficient {text!r}") from None


def _index(x, n, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ModelError(f"{where}: index must be an integer, got {x!r}")
    if not 1 <= x <= n:
        raise ModelError(f"{where}: index {x} out of range 1..{n}")
    return x


def _triples(raw, n, where):
    if not isinstance(raw, list):
        raise ModelError(f"{where}: expected a list of [coefficient, i, j] triples")
    terms = {}
    for t, tr in enumerate(raw):
        loc = f"{where}[{t}]"
        if not isinstance(tr, list) or len(tr) != 3:
            raise ModelError(f"{loc}: expected [coefficient, i, j]")
        c = _rational(tr[0], loc)
        i, j = _index(tr[1], n, loc), _index(tr[2], n, loc)
        if not i < j:
            raise ModelError(f"{loc}: indices must satisfy i < j, got ({i}, {j})")
        terms[(i, j)] = terms.get((i, j), 0) + c
    return Form(2, terms)


def model_from_dict(data, source="<dict>"):
    if not isinstance(data, dict):
        raise ModelError(f"{source}: top level must be an object")
    extra = set(data) - TOP_KEYS
    if extra:
        raise ModelError(f"{source}: unknown keys {sorted(extra)}")
    missing = REQUIRED - set(data)
    if missing:
        raise ModelError(f"{source}: missing keys {sorted(missing)}")
    if data["schema_version"] != SCHEMA_VERSION:
        raise ModelError(f"{source}: unsupported schema_version {data['schema_version']!r}")
    name = data["name"]
    if not isinstance(name, str) or not name:
        raise ModelError(f"{source}: name must be a non-empty string")
    n = data["dimension"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ModelError(f"{source}: dimension must be a positive integer")
    d = data["d"]
    if not isinstance(d, list) or len(d) != n:
        raise ModelError(f"{source}: d must list one entry per generator ({n})")
    d1 = tuple(_triples(entry, n, f"{source}: d[{i + 1}]") for i, entry in enumerate(d))
    flags = data.get("flags", {})
    if not isinstance(flags, dict):
        raise ModelError(f"{source}: flags must be an object")
    for key, val in flags.items():
        if key not in FLAG_TYPES:
            raise ModelError(f"{source}: unknown flag {key!r}")
        if not isinstance(val, FLAG_TYPES[key]):
            raise ModelError(f"{source}: flag {key!r} must be {FLAG_TYPES[key].__name__}")
    model = LieAlgebraModel(n, name, d1, dict(flags))
    v = validate_jacobi(model)
    if not v:
        raise ModelError(f"{source}: Jacobi identity fails: {v.message}")
    J = None
    if "J" in data:
        raw = data["J"]
        if not isinstance(raw, list) or len(raw) != n or any(
                not isinstance(r, list) or len(r) != n for r in raw):
            raise ModelError(f"{source}: J must be a {n}x{n} matrix")
        rows = tuple(tuple(_rational(x, f"{source}: J[{i + 1}][{j + 1}]")
                           for j, x in enumerate(r)) for i, r in enumerate(raw))
        J = AlmostComplexStructure(rows)
    omega = None
    if "omega" in data:
        omega = _triples(data["omega"], n, f"{source}: omega")
        SymplecticForm(model, omega)  # closedness and nondegeneracy
    return ModelFile(model, J, omega, dict(flags), source)


def parse_model(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return model_from_dict(data, str(path))


def _frac_text(x):
    x = Fraction(x)
    return str(x)


def _form_triples(f):
    return [[_frac_text(c.re), i, j] for (i, j), c in f.items()]


def model_to_dict(mf):
    m = mf.model
    out = {"schema_version": SCHEMA_VERSION, "name": m.name, "dimension": m.n,
           "d": [_form_triples(f) for f in m.d1]}
    if mf.J is not None:
        out["J"] = [[_frac_text(x) for x in r] for r in mf.J.J]
    if mf.omega is not None:
        out["omega"] = _form_triples(mf.omega)
    if mf.flags:
        out["flags"] = {k: mf.flags[k] for k in sorted(mf.flags)}
    return out


def _dumps(obj, indent=0):
    """JSON with one line per innermost list."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = [f'{pad}  {json.dumps(k)}: {_dumps(v, indent + 2).lstrip()}' for k, v in obj.items()]
        return pad + "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and any(isinstance(x, list) and x and isinstance(x[0], list)
                                             for x in obj):
        items = [_dumps(x, indent + 2) for x in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, list) and obj and all(isinstance(x, list) for x in obj):
        items = [pad + "  " + json.dumps(x) for x in obj]
        return pad + "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return pad + json.dumps(obj)


def serialize(mf):
    return _dumps(model_to_dict(mf)) + "\n"


# -- shorthand -----------------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)\*)?(\d)(\d)")


def parse_shorthand(text, name="shorthand"):
    """Read the ``(0,0,0,12)`` notation (dimension at most 9) into a model.

    Each entry is ``0`` or a sum of signed index pairs with an optional
    rational factor: ``-13+24``, ``2*12``, ``1/2*34``.
    """
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    entries = [e.strip() for e in body.split(",")]
    n = len(entries)
    if n > 9:
        raise ModelError("shorthand is limited to dimension 9; use coefficient triples")
    d = []
    for g, e in enumerate(entries, 1):
        terms = []
        if e != "0":
            pos = 0
            s = e.replace(" ", "")
            while pos < len(s):
                mt = _TERM.match(s, pos)
                if mt is None or (pos > 0 and not mt.group(1)):
                    raise ModelError(f"{name}: cannot read entry {g}: {e!r}")
                sign, coeff, i, j = mt.groups()
                c = Fraction(coeff or 1) * (-1 if sign == "-" else 1)
                i, j = int(i), int(j)
                if not 1 <= i < j <= n:
                    raise ModelError(f"{name}: bad index pair {i}{j} in entry {g}")
                terms.append([_frac_text(c), i, j])
                pos = mt.end()
        d.append(terms)
    return model_from_dict({"schema_version": SCHEMA_VERSION, "name": name,
                            "dimension": n, "d": d}, name)


# -- bundled registry --------------------------------------------------------------------

def models_root():
    """Directory holding the bundled model files."""
    return resources.files("cohomkit") / "models"


def bundled_names():
    root = models_root()
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name):
    res = models_root() / f"{name}.json"
    if not res.is_file():
        raise ModelError(f"no bundled model named {name!r}")
    try:
        data = json.loads(res.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"bundled:{name}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return model_from_dict(data, f"bundled:{name}")


def resolve(spec):
    """A path to a model file, or the name of a bundled model."""
    p = Path(spec)
    if p.suffix == ".json" or p.exists():
        return parse_model(p)
    return load_bundled(spec)
