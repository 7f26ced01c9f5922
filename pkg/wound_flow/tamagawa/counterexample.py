import logging
from dataclasses import dataclass, field
from fractions import Fraction

from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported
from wound_flow.tamagawa.oesterle import UnsupportedCharacteristic, tamagawa_number

SHA_W_TRIVIAL = "ShaW_trivial"


@dataclass
class CounterexampleReport:
    """How far tau(U) is from #Ext^1(U, G_m) / #Sha(U) for U an extension of V_a by W_a.

    tau(U) = tau(W) tau(V), while #Ext^1(U, G_m) / #Sha(U) picks up tau(V) only, so the two differ
    by #Ext^1(W, G_m) = tau(W) #Sha(W).
    """
    group: GroupSpec
    tau_w: Fraction
    factor: Fraction
    factor_is_lower_bound: bool
    ext_w_expected: str
    assumptions: list[str] = field(default_factory=list)

    @property
    def counterexample(self) -> bool:
        return self.factor != 1

    @property
    def statement(self) -> str:
        if not self.counterexample:
            return "no counterexample detected"
        relation = ">=" if self.factor_is_lower_bound else "="
        return (f"tau(U) = tau(W) tau(V) but #Ext^1(U, G_m)/#Sha(U) differs by a factor {relation} {self.factor}; "
                f"the Tamagawa number formula fails for {self.group}")

    def to_dict(self) -> dict:
        return {
            "group": str(self.group),
            "tauW": f"{self.tau_w.numerator}/{self.tau_w.denominator}",
            "factor": f"{self.factor.numerator}/{self.factor.denominator}",
            "factorIsLowerBound": self.factor_is_lower_bound,
            "extW": self.ext_w_expected,
            "tauU": "tau(W)*tau(V)",
            "counterexample": self.counterexample,
            "statement": self.statement,
            "assumptions": list(self.assumptions),
        }


def counterexample_report(spec: GroupSpec,
                          sha_w_trivial: bool = True,
                          tau_w: Fraction | int | None = None,
                          threads: int = 1) -> CounterexampleReport:
    """Discrepancy factor between tau(U) and #Ext^1(U, G_m)/#Sha(U).

    :param spec: Extension group U_a, U_a^zeta or the descended U_a.
    :type spec: GroupSpec
    :param sha_w_trivial: Assume Sha(W) = 0, so the factor equals tau(W); otherwise tau(W) is only a lower bound,
        defaults to True
    :type sha_w_trivial: bool, optional
    :param tau_w: Use this value for tau(W) instead of computing it, defaults to None
    :type tau_w: Fraction | int | None, optional
    :raises KindUnsupported: For kinds that are not extensions.
    :raises UnsupportedCharacteristic: For p = 2.
    :rtype: CounterexampleReport
    """
    if not spec.kind.is_extension:
        raise KindUnsupported(f"The counterexample report is about extensions of V_a by W_a, not {spec.kind.value}.")
    if spec.p == 2:
        raise UnsupportedCharacteristic("The quantitative report needs p > 2.")
    if tau_w is None:
        tau_w = tamagawa_number(spec.with_kind(GroupKind.W), threads=threads).tau
    tau_w = Fraction(tau_w)
    assumptions = [SHA_W_TRIVIAL] if sha_w_trivial else []
    report = CounterexampleReport(spec, tau_w, tau_w, not sha_w_trivial, "(Z/pZ)^2", assumptions)
    logging.info(f"Counterexample report for {spec}: {report.statement}.")
    return report
