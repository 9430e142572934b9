"""Verification reports and the pipelines the command line drives.

run_verify and run_chain return a (report, exit_code) pair; the CLI only
parses flags, calls one of them, and writes files.  Exit codes: 0 verified,
1 a check ran and failed, 2 bad input (parse error, unknown flag value,
violated precondition), 3 internal singularity.
"""

from __future__ import annotations

import dataclasses
import datetime
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .beltrami import DegenerateFieldError, FieldGrid, certify_qc
from .classifiers import ClassParams, ClassVerdict, check_class, u_jet
from .corpus import BuiltinExample, get_builtin
from .errors import PreconditionError
from .extensions import (
    ExtendedMap,
    RadialProfile,
    ext_brown,
    ext_exterior,
    ext_huang_owa,
    ext_mobius_convex,
    ext_radial_psi,
    ext_thm2,
    ext_thm5,
)
from .grids import GridSpec
from .loewner import (
    ChainCheckReport,
    ChainGrid,
    ChainSingularityError,
    check_theorem_A,
    build_chain,
)
from .mapexpr import MapExpr, parse_map, taylor_jet
from .sphere import is_infinity
from .version import VERSION

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3

THEOREMS = ("t1", "t2", "t3", "t4", "cor1", "brown", "t5", "krzyz", "convex", "psi")

# class criterion to sweep when the caller gave a bare expression
THEOREM_CLASS = {
    "t1": "U_lambda",
    "t2": "U_lambda",
    "t3": "V_p_lambda",
    "t4": "M_Ug",
    "cor1": "M_corollary1",
    "brown": "brown",
    "t5": "thm5",
    "krzyz": "M_krzyz_decay",
    "convex": "U_lambda",
    "psi": "U_lambda",
}

CHAIN_KINDS_SHORT = {
    "thm2": "thm2_eq3",
    "eq7a1": "exterior_eq7a1",
    "t4": "exterior_eq7a1",
    "cor1": "cor1_chain",
    "t5": "thm5_chain",
    "krzyz": "krzyz_eq9",
    "convex": "convex_chain",
}


# ---------------------------------------------------------------------------
# JSON with fixed-width numbers


def _num(x: float) -> str:
    if x != x:
        return '"nan"'
    if x == float("inf"):
        return '"inf"'
    if x == float("-inf"):
        return '"-inf"'
    return format(float(x), ".17g")


def dump_json(obj) -> str:
    """Compact JSON with 17-significant-digit floats and sorted keys."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, complex):
        return f"[{_num(obj.real)},{_num(obj.imag)}]"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
        return f'"{out}"'
    if isinstance(obj, dict):
        items = sorted(obj.items())
        body = ",".join(f"{dump_json(str(k))}:{dump_json(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _point_json(p):
    if is_infinity(p):
        return "infinity"
    p = complex(p)
    return [p.real, p.imag]


def _verdict_json(v: ClassVerdict) -> dict:
    return {
        "class_name": v.class_name,
        "holds": v.holds,
        "worst_point": _point_json(v.worst_point),
        "worst_value": v.worst_value,
        "margin": v.margin,
        "bound": v.bound,
        "n_samples": v.n_samples,
    }


@dataclass(frozen=True)
class VerificationReport:
    map_text: str
    class_verdicts: Tuple[ClassVerdict, ...]
    extension: Optional[dict]
    beltrami: Optional[dict]
    loewner: Optional[dict]
    overall: bool
    grid: str
    wall_time_ms: float
    tool_version: str = VERSION
    schema: int = 1
    timestamp: Optional[str] = None
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "schema": self.schema,
            "tool_version": self.tool_version,
            "map": self.map_text,
            "class_verdicts": [_verdict_json(v) for v in self.class_verdicts],
            "extension": self.extension,
            "beltrami": self.beltrami,
            "loewner": self.loewner,
            "overall": self.overall,
            "grid": self.grid,
            "wall_time_ms": self.wall_time_ms,
            "notes": list(self.notes),
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out

    def to_json(self) -> str:
        return dump_json(self.to_dict())

    def to_text(self) -> str:
        lines = [f"map: {self.map_text}", f"grid: {self.grid}"]
        for v in self.class_verdicts:
            word = "holds" if v.holds else "FAILS"
            lines.append(
                f"class {v.class_name}: {word} "
                f"(worst {v.worst_value:.6g} vs bound {v.bound:.6g})"
            )
        if self.extension is not None:
            lines.append(
                f"extension: {self.extension['outer']['id']} "
                f"claimed_k={self.extension['claimed_k']:.6g}"
            )
        if self.beltrami is not None:
            b = self.beltrami
            lines.append(
                f"beltrami: sup_mu={b['sup_mu']:.6g} "
                f"jac_min={b['jacobian_min']:.6g} "
                f"seam={b['seam_sup_chordal']:.3g} "
                f"{'ok' if b['passed'] else 'VIOLATED'}"
            )
        if self.loewner is not None:
            lo = self.loewner
            lines.append(
                f"chain {lo['kind']}: residual={lo['pde_residual_sup']:.3g} "
                f"dk_sup={lo['dk_radius_sup']:.6g} "
                f"min_re_p={lo['herglotz_min_re']:.6g} "
                f"{'ok' if lo['passed'] else 'VIOLATED'}"
            )
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append("overall: " + ("pass" if self.overall else "FAIL"))
        return "\n".join(lines) + "\n"


def _timestamp(no_timestamp: bool) -> Optional[str]:
    if no_timestamp:
        return None
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _wall(t0: float, no_timestamp: bool) -> float:
    # timing is part of timestamp suppression: byte-identical reruns need it out
    if no_timestamp:
        return 0.0
    return (time.perf_counter() - t0) * 1e3


# ---------------------------------------------------------------------------
# extension dispatch


def _mobius_a2(f: MapExpr) -> complex:
    jet = taylor_jet(f, 6)
    ujet = u_jet(f, 6)
    if max(abs(c) for c in ujet) > 1e-9:
        raise PreconditionError(
            "this case applies only when the small functional vanishes "
            "identically (a disc automorphism denominator)"
        )
    return complex(jet[2])


def build_extension(theorem: str, f: MapExpr, params: Dict[str, complex]) -> ExtendedMap:
    """Route a map to the extension construction the theorem flag names."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}")
    if theorem == "t2":
        return ext_thm2(f)
    if theorem == "t3":
        return ext_huang_owa(f)
    if theorem == "t4":
        return ext_exterior(f, "thm4")
    if theorem == "cor1":
        return ext_exterior(f, "cor1")
    if theorem == "krzyz":
        return ext_exterior(f, "krzyz")
    if theorem == "brown":
        return ext_brown(f, params.get("lam", 1.0 + 0j))
    if theorem == "t5":
        return ext_thm5(f)
    if theorem == "convex":
        return ext_mobius_convex(_mobius_a2(f))
    M = abs(params.get("M", 2.0 + 0j))
    profile = RadialProfile(M)
    if theorem == "psi":
        if "p" in params:
            return ext_radial_psi("vp_pole", params["p"].real, profile)
        return ext_radial_psi("unimodular_a2", _mobius_a2(f), profile)
    # t1 splits on whether the small functional vanishes identically
    ujet = u_jet(f, 6)
    if max(abs(c) for c in ujet) > 1e-9:
        return ext_huang_owa(f)
    a2 = complex(taylor_jet(f, 6)[2])
    if abs(a2) < 1e-12:
        return ext_huang_owa(f)
    if abs(abs(a2) - 1.0) <= 1e-9:
        return ext_radial_psi("unimodular_a2", a2, profile)
    return ext_mobius_convex(a2)


def _class_params_for(theorem: str, params: Dict[str, complex]) -> ClassParams:
    kw = {}
    if "lambda" in params:
        kw["lam"] = params["lambda"].real
    if "k" in params:
        kw["k"] = abs(params["k"])
    if "p" in params:
        kw["p"] = params["p"].real
    if "lam" in params and theorem == "brown":
        kw["brown_lambda"] = params["lam"]
    return ClassParams(**kw)


# ---------------------------------------------------------------------------
# pipelines


def _resolve_map(
    map_text: Optional[str],
    builtin: Optional[str],
    theorem: Optional[str],
    params: Optional[Dict[str, complex]],
):
    """Common front half: substitute, parse, pick theorem and class."""
    if (map_text is None) == (builtin is None):
        raise ValueError("give exactly one of a map expression or a builtin id")
    if builtin is not None:
        ex = get_builtin(builtin)
        merged = ex.params(params)
        text = ex.text(params)
        theorem = theorem or ex.theorem
        class_name = ex.class_name
        cls_params = ex.class_params(params)
        return ex, merged, text, theorem, class_name, cls_params
    merged = {name: complex(val) for name, val in (params or {}).items()}
    theorem = theorem or "t1"
    class_name = THEOREM_CLASS.get(theorem)
    cls_params = _class_params_for(theorem, merged)
    return None, merged, map_text, theorem, class_name, cls_params


def run_verify(
    map_text: Optional[str] = None,
    builtin: Optional[str] = None,
    theorem: Optional[str] = None,
    params: Optional[Dict[str, complex]] = None,
    grid: str = "96x96",
    no_timestamp: bool = False,
) -> Tuple[VerificationReport, int]:
    t0 = time.perf_counter()
    ex, merged, text, theorem, class_name, cls_params = _resolve_map(
        map_text, builtin, theorem, params
    )
    f = parse_map(text)
    gs = GridSpec.parse(grid)

    notes: List[str] = []
    verdicts: List[ClassVerdict] = []
    if class_name is not None:
        verdicts.append(check_class(f, class_name, cls_params, gs))

    em = build_extension(theorem, f, merged)
    field_grid = FieldGrid("sphere", gs.n_r, gs.n_theta)
    claimed = ex.expected_k(params) if ex is not None else None
    verdict = certify_qc(em, claimed_k=claimed, grid=field_grid)
    if ex is not None and ex.negative:
        notes.append("negative control: failure is the documented outcome")

    overall = verdict.passed and all(v.holds for v in verdicts)
    bsum = verdict.summary()
    report = VerificationReport(
        map_text=text,
        class_verdicts=tuple(verdicts),
        extension=em.summary(),
        beltrami=bsum,
        loewner=None,
        overall=overall,
        grid=f"{gs.n_r}x{gs.n_theta}",
        wall_time_ms=_wall(t0, no_timestamp),
        timestamp=_timestamp(no_timestamp),
        notes=tuple(notes),
    )
    return report, (EXIT_PASS if overall else EXIT_FAIL)


def run_chain(
    map_text: Optional[str] = None,
    builtin: Optional[str] = None,
    chain: Optional[str] = None,
    params: Optional[Dict[str, complex]] = None,
    tmax: float = 5.0,
    grid: str = "32x32",
    no_timestamp: bool = False,
) -> Tuple[VerificationReport, int]:
    t0 = time.perf_counter()
    if (map_text is None) == (builtin is None):
        raise ValueError("give exactly one of a map expression or a builtin id")
    if builtin is not None:
        ex = get_builtin(builtin)
        chain = chain or ex.chain
        if chain is None:
            raise ValueError(f"builtin {builtin!r} declares no chain kind")
        text = ex.chain_text(params)
        echo = ex.text(params)
    else:
        ex = None
        text = echo = map_text
    if chain is None:
        raise ValueError("a chain kind is required")
    kind = CHAIN_KINDS_SHORT.get(chain, chain)
    base = parse_map(text)
    gs = GridSpec.parse(grid)

    spec = build_chain(kind, base)
    cg = ChainGrid(z=gs, n_t=64, t_max=float(tmax))
    chk = check_theorem_A(spec, cg)
    lo = dataclasses.asdict(chk)
    lo["kind"] = kind
    lo["base_map"] = text
    window = spec.a1_zero_window()
    if window is not None:
        lo["a1_zero_window"] = list(window)

    overall = chk.passed
    report = VerificationReport(
        map_text=echo,
        class_verdicts=(),
        extension=None,
        beltrami=None,
        loewner=lo,
        overall=overall,
        grid=f"{gs.n_r}x{gs.n_theta}",
        wall_time_ms=_wall(t0, no_timestamp),
        timestamp=_timestamp(no_timestamp),
    )
    return report, (EXIT_PASS if overall else EXIT_FAIL)
