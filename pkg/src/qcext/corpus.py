"""Builtin map corpus for the command-line driver and the sweep tests.

Each entry couples a parameterized expression template with the claims that
ship with it: the membership criterion it is supposed to satisfy, the
extension theorem that applies, the chain kind that reproduces the
extension, and the dilatation bound.  Negative controls are listed with the
same machinery and are expected to fail their pipelines.

Parameter substitution happens on the text level: values are rendered with
const_text and spliced into the template, and the resulting plain grammar
string is the single source of truth echoed in reports.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Tuple

from .classifiers import ClassParams
from .mapexpr import MapExpr, const_text, parse_map

ParamMap = Mapping[str, complex]


@dataclass(frozen=True)
class BuiltinExample:
    id: str
    template: str
    defaults: Tuple[Tuple[str, complex], ...]
    theorem: str
    chain: Optional[str] = None
    class_name: Optional[str] = None
    negative: bool = False
    # chain input when it differs from the map itself (the decay family
    # drives its chain by w, not by g)
    chain_template: Optional[str] = None
    slots: Optional[Callable[[dict], dict]] = field(
        default=None, compare=False, repr=False
    )
    k_of: Optional[Callable[[dict], float]] = field(
        default=None, compare=False, repr=False
    )
    cls_of: Optional[Callable[[dict], ClassParams]] = field(
        default=None, compare=False, repr=False
    )

    def params(self, overrides: Optional[ParamMap] = None) -> Dict[str, complex]:
        out = {name: complex(val) for name, val in self.defaults}
        for name, val in (overrides or {}).items():
            if name not in out:
                raise ValueError(f"builtin {self.id!r} has no parameter {name!r}")
            out[name] = complex(val)
        return out

    def _slot_text(self, params: Dict[str, complex]) -> Dict[str, str]:
        raw = dict(params)
        if self.slots is not None:
            raw.update(self.slots(params))
        return {
            ("lam" if name == "lambda" else name): const_text(val)
            for name, val in raw.items()
        }

    def text(self, overrides: Optional[ParamMap] = None) -> str:
        return self.template.format_map(self._slot_text(self.params(overrides)))

    def map(self, overrides: Optional[ParamMap] = None) -> MapExpr:
        return parse_map(self.text(overrides))

    def chain_text(self, overrides: Optional[ParamMap] = None) -> str:
        tpl = self.chain_template or self.template
        return tpl.format_map(self._slot_text(self.params(overrides)))

    def chain_map(self, overrides: Optional[ParamMap] = None) -> MapExpr:
        return parse_map(self.chain_text(overrides))

    def expected_k(self, overrides: Optional[ParamMap] = None) -> Optional[float]:
        if self.k_of is None:
            return None
        return float(self.k_of(self.params(overrides)))

    def class_params(self, overrides: Optional[ParamMap] = None) -> ClassParams:
        p = self.params(overrides)
        if self.cls_of is None:
            return ClassParams()
        return self.cls_of(p)


def _example1_slots(p: Dict[str, complex]) -> Dict[str, complex]:
    lam = p["lambda"]
    rot = cmath.exp(1j * p["theta"].real)
    return {"c1": (1.0 + lam) * rot, "c2": lam * rot * rot}


BUILTINS: Dict[str, BuiltinExample] = {
    b.id: b
    for b in (
        BuiltinExample(
            id="identity",
            template="z",
            defaults=(),
            theorem="t2",
            chain="thm2",
            class_name="U_lambda",
            k_of=lambda p: 0.0,
            cls_of=lambda p: ClassParams(lam=1.0),
        ),
        BuiltinExample(
            id="example1",
            template="z/(1-{c1}*z+{c2}*z^2)",
            defaults=(("lambda", 0.5 + 0j), ("theta", 0j)),
            theorem="t1",
            class_name="U_lambda",
            slots=_example1_slots,
            k_of=lambda p: p["lambda"].real,
            cls_of=lambda p: ClassParams(lam=p["lambda"].real),
        ),
        BuiltinExample(
            id="example2",
            template="z/(1+{lam}*z^2)",
            defaults=(("lambda", 0.5 + 0j),),
            theorem="t2",
            chain="thm2",
            class_name="U_lambda",
            k_of=lambda p: p["lambda"].real,
            cls_of=lambda p: ClassParams(lam=p["lambda"].real),
        ),
        BuiltinExample(
            id="example3",
            template="{p}*z/(({p}-z)*(1-{lp}*z))",
            defaults=(("p", 0.5 + 0j), ("lambda", 0.5 + 0j)),
            theorem="t3",
            class_name="V_p_lambda",
            slots=lambda p: {"lp": p["lambda"] * p["p"]},
            k_of=lambda p: p["lambda"].real,
            cls_of=lambda p: ClassParams(lam=p["lambda"].real, p=p["p"].real),
        ),
        BuiltinExample(
            id="koebe",
            template="z/(1-z)^2",
            defaults=(),
            theorem="t1",
            class_name="U_lambda",
            negative=True,
            cls_of=lambda p: ClassParams(lam=0.999),
        ),
        BuiltinExample(
            id="kp",
            template="{p}*z/(({p}-z)*(1-{p}*z))",
            defaults=(("p", 0.5 + 0j),),
            theorem="t3",
            class_name="V_p_lambda",
            negative=True,
            cls_of=lambda p: ClassParams(lam=1.0, p=p["p"].real),
        ),
        BuiltinExample(
            id="mobius",
            template="z/(1-{a2}*z)",
            defaults=(("a2", 0.5 + 0j), ("M", 2.0 + 0j)),
            theorem="convex",
            chain="convex",
            class_name="U_lambda",
            k_of=lambda p: abs(p["a2"]),
            cls_of=lambda p: ClassParams(lam=1.0),
        ),
        BuiltinExample(
            id="p_mobius",
            template="{p}*z/({p}-z)",
            defaults=(("p", 0.5 + 0j), ("M", 2.0 + 0j)),
            theorem="psi",
            class_name="V_p_lambda",
            k_of=lambda p: (abs(p["M"]) ** 2 - 1.0) / (abs(p["M"]) ** 2 + 1.0),
            cls_of=lambda p: ClassParams(lam=1.0, p=p["p"].real),
        ),
        BuiltinExample(
            id="krzyz",
            template="z+{k}/z",
            defaults=(("k", 0.5 + 0j),),
            theorem="krzyz",
            chain="krzyz",
            chain_template="{k}*z",
            class_name="M_krzyz_decay",
            k_of=lambda p: abs(p["k"]),
            cls_of=lambda p: ClassParams(k=abs(p["k"])),
        ),
        BuiltinExample(
            id="exterior_u",
            template="z+{b}/z",
            defaults=(("b", 0.12 + 0j),),
            theorem="t4",
            chain="eq7a1",
            class_name="M_Ug",
            cls_of=lambda p: ClassParams(k=0.5),
        ),
        BuiltinExample(
            id="exterior_pole",
            template="z^2/({c}-z)",
            defaults=(("c", 0.3 + 0j),),
            theorem="cor1",
            chain="cor1",
            class_name="M_corollary1",
            cls_of=lambda p: ClassParams(k=0.75),
        ),
        BuiltinExample(
            id="brown_quad",
            template="z-{c}*z^2",
            defaults=(("c", 0.25 + 0j), ("lam", 1.0 + 0j)),
            theorem="brown",
            class_name="brown",
            cls_of=lambda p: ClassParams(k=0.5, brown_lambda=p["lam"]),
        ),
        BuiltinExample(
            id="neg_deriv",
            template="-z+{c}*z^2",
            defaults=(("c", 0.3 + 0j),),
            theorem="t5",
            chain="t5",
            class_name="thm5",
            k_of=lambda p: 2.0 * abs(p["c"]),
            cls_of=lambda p: ClassParams(k=min(2.0 * abs(p["c"]), 0.999)),
        ),
    )
}


def builtin_ids() -> Tuple[str, ...]:
    return tuple(BUILTINS)


def get_builtin(bid: str) -> BuiltinExample:
    try:
        return BUILTINS[bid]
    except KeyError:
        raise ValueError(
            f"unknown builtin {bid!r}; choose from {', '.join(BUILTINS)}"
        ) from None
