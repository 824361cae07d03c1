# src/expressions/evaluator.py
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Callable, Dict, List, Optional, Union

from src.core.bundles import (
    Bundle,
    dual,
    segre_total,
    sym_power,
    tensor,
    whitney_sum,
)
from src.core.errors import EvaluationTypeError, UnboundSymbol
from src.core.graded_ring import ChowRing, GradedClass, integrate, invert_unit
from src.expressions.parser import (
    Add,
    Call,
    Expression,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Symbol,
    parse,
)
from src.services.residual import contribution

logger = logging.getLogger(__name__)

Value = Union[Fraction, GradedClass, Bundle]


@dataclass
class EvaluationContext:
    """Names visible to an expression: ring classes and bundles."""

    ring: ChowRing
    symbols: Dict[str, GradedClass] = field(default_factory=dict)
    bundles: Dict[str, Bundle] = field(default_factory=dict)

    @classmethod
    def from_ring(cls, ring: ChowRing) -> "EvaluationContext":
        return cls(ring, {g.name: ring.generator(g.name) for g in ring.generators})

    @classmethod
    def from_preset(cls, preset) -> "EvaluationContext":
        return cls(preset.ring, dict(preset.symbols()), dict(preset.bundles()))

    def bind_bundle(self, name: str, bundle: Bundle) -> None:
        if bundle.ring is not self.ring and bundle.ring != self.ring:
            raise EvaluationTypeError(f"bundle {name!r} lives on {bundle.ring.label}, not {self.ring.label}")
        self.bundles[name] = bundle.named(name)

    def lookup(self, name: str) -> Value:
        if name in self.symbols:
            return self.symbols[name]
        if name in self.bundles:
            return self.bundles[name]
        raise UnboundSymbol(f"unknown name {name!r} on {self.ring.label}")


def _kind(value: Value) -> str:
    if isinstance(value, Bundle):
        return "bundle"
    if isinstance(value, GradedClass):
        return "class"
    return "number"


class Evaluator:
    def __init__(self, context: EvaluationContext):
        self.context = context
        self.ring = context.ring
        self.functions: Dict[str, Callable[[List[Value]], Value]] = {
            "integrate": self._integrate,
            "chern": self._chern,
            "segre": self._segre,
            "dual": lambda args: dual(self._bundle(args, 0, "dual", arity=1)),
            "sym": self._sym,
            "tensor": lambda args: tensor(*self._bundles(args, "tensor", 2)),
            "oplus": lambda args: whitney_sum(*self._bundles(args, "oplus", 2)),
            "invert": lambda args: invert_unit(self._as_class(self._single(args, "invert"), "invert")),
            "contribution": self._contribution,
            "rank": lambda args: Fraction(self._bundle(args, 0, "rank", arity=1).rank),
        }

    def evaluate(self, node: Expression) -> Value:
        if isinstance(node, Number):
            return node.value
        if isinstance(node, Symbol):
            return self.context.lookup(node.name)
        if isinstance(node, Neg):
            return -self._arithmetic(self.evaluate(node.operand), "-")
        if isinstance(node, (Add, Sub, Mul)):
            operator = {Add: "+", Sub: "-", Mul: "*"}[type(node)]
            left = self._arithmetic(self.evaluate(node.left), operator)
            right = self._arithmetic(self.evaluate(node.right), operator)
            if isinstance(node, Add):
                return left + right
            if isinstance(node, Sub):
                return left - right
            return left * right
        if isinstance(node, Pow):
            return self._arithmetic(self.evaluate(node.base), "^") ** node.exponent
        if isinstance(node, Call):
            if node.name not in self.functions:
                raise UnboundSymbol(f"unknown function {node.name!r}")
            return self.functions[node.name]([self.evaluate(a) for a in node.args])
        raise EvaluationTypeError(f"cannot evaluate {node!r}")

    # argument helpers

    def _arithmetic(self, value: Value, operator: str) -> Union[Fraction, GradedClass]:
        if isinstance(value, Bundle):
            raise EvaluationTypeError(
                f"operator {operator!r} needs classes or numbers, got a bundle; use chern(...)"
            )
        return value

    def _single(self, args: List[Value], name: str) -> Value:
        if len(args) != 1:
            raise EvaluationTypeError(f"{name} takes 1 argument, got {len(args)}")
        return args[0]

    def _as_class(self, value: Value, name: str) -> GradedClass:
        if isinstance(value, Bundle):
            raise EvaluationTypeError(f"{name} needs a class, got a bundle")
        if isinstance(value, Fraction):
            return self.ring.scalar(value)
        return value

    def _as_integer(self, value: Value, name: str) -> int:
        if not isinstance(value, Fraction) or value.denominator != 1:
            raise EvaluationTypeError(f"{name} needs an integer, got {_kind(value)} {value}")
        return int(value)

    def _bundle(self, args: List[Value], index: int, name: str, arity: Optional[int] = None) -> Bundle:
        if arity is not None and len(args) != arity:
            raise EvaluationTypeError(f"{name} takes {arity} argument(s), got {len(args)}")
        if index >= len(args) or not isinstance(args[index], Bundle):
            got = _kind(args[index]) if index < len(args) else "nothing"
            raise EvaluationTypeError(f"{name} needs a bundle as argument {index + 1}, got {got}")
        return args[index]

    def _bundles(self, args: List[Value], name: str, arity: int) -> List[Bundle]:
        if len(args) != arity:
            raise EvaluationTypeError(f"{name} takes {arity} arguments, got {len(args)}")
        return [self._bundle(args, i, name) for i in range(arity)]

    # functions

    def _integrate(self, args: List[Value]) -> Fraction:
        return integrate(self._as_class(self._single(args, "integrate"), "integrate"))

    def _graded(self, args: List[Value], name: str, total: Callable[[Bundle], GradedClass]) -> GradedClass:
        if len(args) not in (1, 2):
            raise EvaluationTypeError(f"{name} takes 1 or 2 arguments, got {len(args)}")
        value = total(self._bundle(args, 0, name))
        if len(args) == 2:
            return value.component(self._as_integer(args[1], name))
        return value

    def _chern(self, args: List[Value]) -> GradedClass:
        return self._graded(args, "chern", lambda b: b.chern)

    def _segre(self, args: List[Value]) -> GradedClass:
        return self._graded(args, "segre", segre_total)

    def _sym(self, args: List[Value]) -> Bundle:
        if len(args) != 2:
            raise EvaluationTypeError(f"sym takes 2 arguments, got {len(args)}")
        d = self._as_integer(args[0], "sym")
        if d < 1:
            raise EvaluationTypeError(f"sym needs a positive degree, got {d}")
        return sym_power(self._bundle(args, 1, "sym"), d)

    def _contribution(self, args: List[Value]) -> GradedClass:
        if not args:
            raise EvaluationTypeError("contribution needs at least one bundle")
        bundles = [self._bundle(args, i, "contribution") for i in range(len(args))]
        return contribution([(b, b.rank) for b in bundles], self.ring.dimension)


def _evaluate_any(expression: Union[str, Expression], context: EvaluationContext) -> Value:
    node = parse(expression) if isinstance(expression, str) else expression
    return Evaluator(context).evaluate(node)


def evaluate(expression: Union[str, Expression], context: EvaluationContext) -> Union[Fraction, GradedClass]:
    value = _evaluate_any(expression, context)
    if isinstance(value, Bundle):
        raise EvaluationTypeError("expression evaluates to a bundle; wrap it in chern(...) or segre(...)")
    return value


def evaluate_bundle(expression: Union[str, Expression], context: EvaluationContext) -> Bundle:
    value = _evaluate_any(expression, context)
    if not isinstance(value, Bundle):
        raise EvaluationTypeError(f"expected a bundle expression, got a {_kind(value)}")
    return value

