"""Acceptance checks reproducing the worked examples and core properties.

Each criterion yields one or more :class:`Check` results. ``run_acceptance``
executes them all and ``format_summary`` renders one line per check; the
output depends only on the seed, never on timing.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from . import linalg
from .classical import (
    POVM,
    POVMSettings,
    ProjectiveSettings,
    check_monotonicity_sample,
    classical_correlation_povm,
    classical_correlation_projective,
    condition_on_measurement,
    helstrom_measurement,
    holevo_objective,
    holevo_relative_form,
    measurement_value,
    superadditivity_probe,
)
from .entropy import (
    entropy_decomposition_gap,
    mutual_information,
    quantum_relative_entropy,
    von_neumann_entropy,
)
from .separable import (
    SeparableSettings,
    classical_correlation_relent,
    relative_entropy_of_entanglement,
)
from .states import (
    KET0,
    KET_PLUS,
    Ensemble,
    make_bell_mixture,
    make_nonorthogonal_separable,
    make_werner,
    product_state,
    pure_state,
    random_bipartite,
    random_local_channel,
    random_pure_vector,
    random_state,
    random_unitary,
    two_copies,
)

P_GRID = np.round(np.linspace(0.5, 1.0, 11), 2)
WERNER_C_RE = 0.2075


@dataclass
class Check:
    criterion: int
    name: str
    passed: bool
    metric: float
    tolerance: float
    relation: str = "<="  # metric must be <= tolerance, or >= for margins

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  [{self.criterion}] {self.name:<40s} "
            f"metric={self.metric:.3e} (need {self.relation} {self.tolerance:.0e})"
        )


def _le(criterion, name, metric, tol) -> Check:
    return Check(criterion, name, bool(metric <= tol), float(metric), tol, "<=")


def _ge(criterion, name, metric, tol) -> Check:
    return Check(criterion, name, bool(metric >= tol), float(metric), tol, ">=")


def _xlog2x(x):
    return x * np.log2(x) if x > 0 else 0.0


def bell_mixture_closed_forms(p):
    """(I, E_RE) for p|phi+><phi+| + (1-p)|phi-><phi-|, p >= 1/2."""
    h = _xlog2x(p) + _xlog2x(1 - p)
    return 2 + h, 1 + h


def werner_closed_forms(p):
    """(I, E_RE) for the Werner state with f = (3p+1)/4, p >= 1/3."""
    f = (3 * p + 1) / 4
    i = 2 + _xlog2x(f) + ((1 - f) * np.log2((1 - f) / 3) if f < 1 else 0.0)
    e = 1 + _xlog2x(f) + _xlog2x(1 - f)
    return i, e


class _Suite:
    def __init__(self, seed: int):
        self.seed = seed
        self.sep = SeparableSettings(seed=seed)
        self.povm = POVMSettings(seed=seed)
        # (E_RE, I) pairs gathered along the way for the E_RE <= I check
        self.ere_vs_i: List[tuple] = []

    def rng_seed(self, tag: int, i: int):
        return [self.seed, tag, i]

    def ere(self, state):
        approx = relative_entropy_of_entanglement(state, self.sep)
        self.ere_vs_i.append((approx.rel_entropy, mutual_information(state)))
        return approx

    def criterion_1(self):
        dev_i = dev_e = dev_c = 0.0
        for p in P_GRID:
            s = make_bell_mixture(p)
            i_ref, e_ref = bell_mixture_closed_forms(p)
            dev_i = max(dev_i, abs(mutual_information(s) - i_ref))
            dev_e = max(dev_e, abs(self.ere(s).rel_entropy - e_ref))
            dev_c = max(dev_c, abs(classical_correlation_projective(s, "B").value - 1.0))
        return [
            _le(1, "bell-mixture I closed form", dev_i, 1e-9),
            _le(1, "bell-mixture E_RE closed form", dev_e, 2e-3),
            _le(1, "bell-mixture C_p = 1", dev_c, 1e-6),
        ]

    def criterion_2(self):
        dev_i = dev_e = dev_c = 0.0
        diffs = []
        for p in P_GRID:
            s = make_werner(p)
            i_ref, e_ref = werner_closed_forms(p)
            dev_i = max(dev_i, abs(mutual_information(s) - i_ref))
            approx = self.ere(s)
            c_re, _ = classical_correlation_relent(s, approximation=approx)
            dev_e = max(dev_e, abs(approx.rel_entropy - e_ref))
            dev_c = max(dev_c, abs(c_re - WERNER_C_RE))
            diffs.append(c_re - approx.rel_entropy)
        signs = np.sign(diffs)
        changes = int(np.sum(signs[1:] != signs[:-1]))
        return [
            _le(2, "werner I closed form", dev_i, 1e-9),
            _le(2, "werner E_RE closed form", dev_e, 2e-3),
            _le(2, "werner C_RE = 0.2075", dev_c, 5e-3),
            Check(2, "werner C_RE - E_RE one sign change", changes == 1, changes, 1, "=="),
        ]

    def criterion_3(self):
        max_ere = dev_cre = 0.0
        margin = None
        for p in P_GRID:
            s = make_nonorthogonal_separable(p)
            approx = self.ere(s)
            c_re, _ = classical_correlation_relent(s, approximation=approx)
            i = mutual_information(s)
            max_ere = max(max_ere, approx.rel_entropy)
            dev_cre = max(dev_cre, abs(c_re - i))
            if np.isclose(p, 0.5):
                c_p = classical_correlation_projective(s, "B").value
                margin = i - c_p - approx.rel_entropy
        return [
            _le(3, "nonorthogonal E_RE = 0", max_ere, 2e-4),
            _le(3, "nonorthogonal C_RE = I", dev_cre, 2e-4),
            _ge(3, "I - C_p - E_RE at p=0.5", margin, 1e-3),
        ]

    def criterion_4(self):
        dev_c = dev_i = 0.0
        for i in range(50):
            s = pure_state(random_pure_vector(4, self.rng_seed(4, i)))
            s_a = von_neumann_entropy(s.rho_a)
            dev_c = max(dev_c, abs(classical_correlation_povm(s, "B", opts=self.povm).value - s_a))
            dev_i = max(dev_i, abs(mutual_information(s) - 2 * s_a))
        return [
            _le(4, "pure states C_povm = S(rho_A)", dev_c, 2e-3),
            _le(4, "pure states I = 2 S(rho_A)", dev_i, 1e-9),
        ]

    def criterion_5(self):
        dev_lu = 0.0
        for i in range(20):
            s = random_bipartite(self.rng_seed(51, i))
            u = np.kron(random_unitary(2, self.rng_seed(52, i)), random_unitary(2, self.rng_seed(53, i)))
            before = classical_correlation_projective(s, "B").value
            after = classical_correlation_projective(s.conjugated(u), "B").value
            dev_lu = max(dev_lu, abs(after - before))

        worst_increase = -np.inf
        for i in range(20):
            s = random_bipartite(self.rng_seed(54, i))
            side = "A" if i % 2 == 0 else "B"
            channel = random_local_channel(2, 2 + i % 2, self.rng_seed(55, i))
            before, after = check_monotonicity_sample(s, channel, side, self.povm, measured_side="A")
            worst_increase = max(worst_increase, after.value - before.value)

        max_product = 0.0
        for i in range(10):
            s = product_state(random_state(2, 2, self.rng_seed(56, i)), random_state(2, 2, self.rng_seed(57, i)))
            max_product = max(max_product, classical_correlation_projective(s, "B").value)

        for i in range(10):
            self.ere(random_bipartite(self.rng_seed(58, i), rank=1 + i % 4))
        ere_excess = max(e - i for e, i in self.ere_vs_i)

        dev_add = 0.0
        for i in range(10):
            s = random_bipartite(self.rng_seed(59, i), rank=1 + i % 4)
            dev_add = max(dev_add, abs(mutual_information(two_copies(s)) - 2 * mutual_information(s)))
        return [
            _le(5, "local-unitary invariance of C_p", dev_lu, 2e-3),
            _le(5, "monotone under local channels", worst_increase, 2e-3),
            _le(5, "C_p of product states", max_product, 1e-9),
            _le(5, "E_RE <= I", ere_excess, 1e-6),
            _le(5, "I additive on two copies", dev_add, 1e-9),
        ]

    def criterion_6(self):
        dev_rel = 0.0
        for i in range(20):
            s = random_bipartite(self.rng_seed(61, i), rank=1 + i % 4)
            dev_rel = max(dev_rel, abs(quantum_relative_entropy(s.matrix, s.product_of_marginals()) - mutual_information(s)))

        dev_holevo = 0.0
        count = 0
        for p in P_GRID:
            s = make_nonorthogonal_separable(p)
            seen = []
            classical_correlation_projective(s, "B", ProjectiveSettings(monitor=seen.append))
            for batch in seen:
                for effects in batch:
                    ens = condition_on_measurement(s, POVM(tuple(effects)), "B")
                    dev_holevo = max(dev_holevo, abs(holevo_objective(ens) - holevo_relative_form(ens)))
                    count += 1

        dev_gap = 0.0
        for i in range(10):
            d = 4
            u = random_unitary(d, self.rng_seed(62, i))
            k = 2 + i % 2
            # split an orthonormal basis into k blocks and put a mixed state on each
            blocks = np.array_split(np.arange(d), k)
            members = []
            for j, blk in enumerate(blocks):
                v = u[:, blk]
                w = np.random.default_rng(self.rng_seed(63, 10 * i + j)).dirichlet(np.ones(len(blk)))
                members.append((v * w) @ linalg.dagger(v))
            probs = np.random.default_rng(self.rng_seed(64, i)).dirichlet(np.ones(k))
            dev_gap = max(dev_gap, abs(entropy_decomposition_gap(Ensemble(probs, tuple(members)))))
        return [
            _le(6, "S(rho||rho_A x rho_B) = I", dev_rel, 1e-9),
            _le(6, f"Holevo forms agree ({count} meas.)", dev_holevo, 1e-9),
            _le(6, "orthogonal-support entropy gap = 0", dev_gap, 1e-9),
        ]

    def criterion_7(self):
        checks = []
        for label, s in (("bell p=0.75", make_bell_mixture(0.75)), ("werner p=0.8", make_werner(0.8))):
            single, double = superadditivity_probe(s)
            checks.append(_ge(7, f"two-copy >= 2 C_p, {label}", double - single, -1e-6))
        return checks

    def criterion_8(self):
        p = 0.5
        s = make_nonorthogonal_separable(p)
        c_p = classical_correlation_projective(s, "B").value
        h = helstrom_measurement(linalg.projector(KET0), linalg.projector(KET_PLUS), p)
        gap = c_p - measurement_value(s, h, "B")
        return [_ge(8, "Helstrom below optimum at p=0.5", gap, 1e-4)]


CRITERIA: Dict[int, str] = {
    1: "criterion_1",
    2: "criterion_2",
    3: "criterion_3",
    4: "criterion_4",
    5: "criterion_5",
    6: "criterion_6",
    7: "criterion_7",
    8: "criterion_8",
}


def run_criterion(number: int, seed: int = 0) -> List[Check]:
    return getattr(_Suite(seed), CRITERIA[number])()


def run_acceptance(seed: int = 0, progress: Callable[[Check], None] = None) -> List[Check]:
    """Run all criteria in order with one shared suite (criterion 5 reuses E_RE results)."""
    suite = _Suite(seed)
    results = []
    for number in sorted(CRITERIA):
        for check in getattr(suite, CRITERIA[number])():
            results.append(check)
            if progress:
                progress(check)
    return results


def format_summary(results: List[Check]) -> str:
    lines = [c.line() for c in results]
    passed = sum(c.passed for c in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
