"""Balance: every role that may still act must be told which way a choice went."""

from __future__ import annotations

from typing import TYPE_CHECKING

from mpst.mixed.analysis._checks import CheckResult
from mpst.mixed.core import (FAIL, Interaction, MCActive, MCDef, roles,
                             subterms, truncate, unfold_all_once)
from mpst.mixed.frontend import MATH, render

if TYPE_CHECKING:
    from mpst.mixed.core import GlobalType, RoleSet

BALANCE = 'balance'


def _show(roles_: RoleSet) -> str:
    return '{' + ', '.join(sorted(roles_)) + '}'


def imbalance(g: GlobalType) -> str | None:
    """Describes the first unbalanced subterm of ``g``, or returns None.

    Recursive subterms are cut to ``end`` after one unfolding, so copies introduced by
    the unfolding are not checked out of context.
    """
    for s in subterms(truncate(unfold_all_once(g))):  # type: ignore[arg-type]
        match s:
            case Interaction():
                third: list[tuple[str, RoleSet]] = [
                    (label, roles(cont) - {s.sender, s.receiver}) for label, cont in s.branches]
                first_label, first = third[0]
                for label, other in third[1:]:
                    if other != first:
                        return (f'{render(s, MATH)}: branch {first_label} involves {_show(first)}'
                                f' but branch {label} involves {_show(other)}')
            case MCDef():
                left, right = roles(s.lhs), roles(s.rhs)
                if left != right:
                    return f'{render(s, MATH)}: lhs roles {_show(left)} differ from rhs roles {_show(right)}'
            case MCActive():
                left, right = roles(s.lhs) | s.lset, roles(s.rhs) | s.rset
                if left != right:
                    return f'{render(s, MATH)}: lhs roles {_show(left)} differ from rhs roles {_show(right)}'
    return None


def check_balance(g0: GlobalType) -> CheckResult:
    """Checks that a global type is balanced.

    Args:
        g0 (GlobalType): Global type, initial or reached during execution

    Returns:
        CheckResult: Failure names the first offending subterm and both role sets
    """
    found = imbalance(g0)
    if found is None:
        return CheckResult(BALANCE)
    return CheckResult(BALANCE, FAIL, (found,))
