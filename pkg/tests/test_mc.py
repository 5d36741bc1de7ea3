import json

import numpy as np
import pytest

from buchi_rl.automata.io import load_ldba
from buchi_rl.automata.models import TRAP
from buchi_rl.errors import NonContractiveError, PolicyCoverageError, PrismFormatError
from buchi_rl.mc.bounds import (
    discounted_reward_bounds,
    loose_constants,
    tight_hyperparameters,
)
from buchi_rl.mc.dtmc import (
    bsccs,
    buchi_probability,
    expected_discounted_reward,
    induce_dtmc,
)
from buchi_rl.mc.mdp import (
    maximal_end_components,
    mdp_max_buchi_probability,
    optimal_satisfaction,
)
from buchi_rl.mc.models import Dtmc, Row
from buchi_rl.mc.prism import dump_jsonl, export_prism, parse_prism
from buchi_rl.mc.simulate import simulate_buchi
from buchi_rl.product.explicit import enumerate_product
from buchi_rl.product.models import ProductMdp, ProductState, env_action, eps_action
from buchi_rl.product.schemas import constant_reward, linear_reward
from buchi_rl.product.transitions import available_actions
from tests.conftest import chain_mdp, random_mdp

ALWAYS_ACCEPTING = (
    "ap: a\nstates: 2\ninit: 0\nnondet: 0\nacc: 1\n"
    "trans: 0 {} 0\ntrans: 0 {a} 0\neps: 0 1\ntrans: 1 {} 1\ntrans: 1 {a} 1\n"
)


def random_policy(rng, product):
    """Uniformly chosen available action for every (s, q), counter ignored."""
    m, a = product.mdp, product.automaton
    policy = {}
    for s in m.states:
        for q in (*a.states, TRAP):
            acts = available_actions(m, a, ProductState(s, q, 0))
            policy[(s, q)] = acts[int(rng.integers(len(acts)))]
    return policy


def accepting_loop_dtmc(U: float) -> Dtmc:
    """Single accepting self-loop paying U with discount 1 - U."""
    return Dtmc.from_rows([[Row(0, 1.0, U, 1.0 - U)]], accepting=[True])


def test_gate_optimal_policy_satisfaction(gate_product, gate_policy):
    """Test that the hand-made gate policy satisfies with 0.8."""
    d = induce_dtmc(gate_product, gate_policy)
    assert buchi_probability(d).initial == pytest.approx(0.8, abs=1e-9)


def test_gate_optimal_policy_bsccs(gate, gate_product, gate_policy):
    """Test the two BSCCs of the gate chain."""
    d = induce_dtmc(gate_product, gate_policy)
    decomposition = bsccs(d)
    assert len(decomposition.components) == 2
    assert sorted(decomposition.accepting) == [False, True]
    for component, accepting in zip(decomposition.components, decomposition.accepting):
        cells = {d.states[i].s for i in component}
        assert cells == ({gate.index(2, 9)} if accepting else {gate.index(3, 0)})


def test_induced_chain_counter_free_policy(gate, gate_product, gate_policy):
    """Test that the induced chain tracks the counter the policy ignores."""
    d = induce_dtmc(gate_product, gate_policy)
    assert d.states[0] == ProductState(gate.init, 0, 0)
    assert {st.n for st in d.states if st.s == gate.index(2, 9) and st.q == 1} == set(
        range(11)
    )


def test_bsccs_are_closed(gate_product, gate_policy):
    """Test that no edge leaves a BSCC."""
    d = induce_dtmc(gate_product, gate_policy)
    successors = d.successors()
    for component in bsccs(d).components:
        members = set(component)
        assert all(set(successors[i]) <= members for i in component)


def test_rejecting_sink_only():
    """Test a chain that only reaches a rejecting sink."""
    d = Dtmc.from_rows([[Row(0, 1.0)]], accepting=[False])
    assert buchi_probability(d).initial == 0.0


def test_reachable_accepting_sink():
    """Test a chain that reaches an accepting sink with certainty."""
    d = Dtmc.from_rows(
        [[Row(0, 0.5), Row(1, 0.5)], [Row(1, 1.0)]], accepting=[False, True]
    )
    assert buchi_probability(d).initial == pytest.approx(1.0)


def test_transient_accepting_state_does_not_count():
    """Test that visiting an accepting state once is not enough."""
    d = Dtmc.from_rows(
        [[Row(1, 1.0)], [Row(2, 1.0)], [Row(2, 1.0)]], accepting=[False, True, False]
    )
    assert buchi_probability(d).values.tolist() == [0.0, 0.0, 0.0]


def test_adding_accepting_sink_edge_is_monotone():
    """Test that redirecting mass to an accepting sink never lowers satisfaction."""
    base = Dtmc.from_rows(
        [[Row(1, 0.5), Row(2, 0.5)], [Row(1, 1.0)], [Row(2, 1.0)]],
        accepting=[False, True, False],
    )
    extended = Dtmc.from_rows(
        [[Row(1, 0.5), Row(2, 0.5)], [Row(1, 1.0)], [Row(1, 0.5), Row(2, 0.5)]],
        accepting=[False, True, False],
    )
    before, after = buchi_probability(base).values, buchi_probability(extended).values
    assert np.all(after >= before - 1e-12)
    assert after[0] == pytest.approx(1.0)


@pytest.mark.parametrize("U", [0.1, 0.5, 0.9])
def test_geometric_identity(U):
    """Test that an accepting self-loop paying U with discount 1 - U is worth 1."""
    assert expected_discounted_reward(accepting_loop_dtmc(U)).initial == pytest.approx(
        1.0, abs=1e-10
    )


@pytest.mark.parametrize("U", [0.1, 0.5, 0.9])
def test_geometric_identity_through_product(U):
    """Test the same identity on an enumerated product."""
    m = chain_mdp(2, [frozenset({"a"})] * 2)
    a = load_ldba(ALWAYS_ACCEPTING)
    policy = {(s, 0): eps_action(1) for s in m.states}
    policy.update({(s, 1): env_action(0) for s in m.states})
    d = induce_dtmc(ProductMdp(m, a, constant_reward(U)), policy)
    assert expected_discounted_reward(d).initial == pytest.approx(1.0, abs=1e-10)


def test_zero_reward_chain():
    """Test a chain that never pays."""
    d = Dtmc.from_rows([[Row(0, 1.0, 0.0, 0.99)]], accepting=[False])
    assert expected_discounted_reward(d).initial == 0.0


def test_undiscounted_rewarded_cycle():
    """Test that a paying cycle without discount is rejected."""
    d = Dtmc.from_rows([[Row(0, 1.0, 0.5, 1.0)]], accepting=[True])
    with pytest.raises(NonContractiveError):
        expected_discounted_reward(d)


def test_gate_bracket(gate_product, gate_policy):
    """Test the discounted reward bounds on the gate policy."""
    d = induce_dtmc(gate_product, gate_policy)
    P = buchi_probability(d).initial
    G = expected_discounted_reward(d).initial
    C, N = loose_constants(d)
    lower, upper = discounted_reward_bounds(P, 0.1, 0.99, C, N)
    assert lower <= G <= upper


@pytest.mark.parametrize(
    "env, automaton, K",
    [("frozen_lake", "frozen_lake_ldba", 3), ("office", "office_ldba", 2)],
)
def test_benchmark_bracket(request, rng, env, automaton, K):
    """Test the discounted reward bounds under random policies."""
    m, a = request.getfixturevalue(env), request.getfixturevalue(automaton)
    product = ProductMdp(m, a, linear_reward(K, 0.1, 0.99))
    d = induce_dtmc(product, random_policy(rng, product))
    P = buchi_probability(d).initial
    G = expected_discounted_reward(d).initial
    lower, upper = discounted_reward_bounds(P, 0.1, 0.99, *loose_constants(d))
    assert lower <= G <= upper


def test_loose_constants(gate_product, gate_policy):
    """Test the loose constants derived from chain size and p_min."""
    d = induce_dtmc(gate_product, gate_policy)
    C, N = loose_constants(d)
    assert N == d.n
    assert C == pytest.approx(d.n / 0.2)


def test_tight_hyperparameters():
    """Test the hyperparameter formula on known constants."""
    U, gamma = tight_hyperparameters(10.0, 5.0, 4)
    assert U == pytest.approx(0.1)
    assert gamma == pytest.approx(1 - 1 / 45)


def test_bscc_values_are_exact(fga_gnc):
    """Test that probability is exactly one on accepting BSCCs and zero on rejecting ones."""
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = random_mdp(rng, n=int(rng.integers(2, 6)))
        product = ProductMdp(m, fga_gnc, linear_reward(2, 0.5))
        d = induce_dtmc(product, random_policy(rng, product))
        decomposition = bsccs(d)
        values = buchi_probability(d, decomposition).values
        assert np.all(values[decomposition.accepting_states()] == 1.0)
        assert np.all(values[decomposition.rejecting_states()] == 0.0)
        assert np.all((values >= 0.0) & (values <= 1.0))
        successors = d.successors()
        for component in decomposition.components:
            assert all(set(successors[i]) <= set(component) for i in component)


def test_simulation_agrees(fga_gnc):
    """Test that Monte-Carlo estimates match the exact probability."""
    rng = np.random.default_rng(4)
    for _ in range(5):
        m = random_mdp(rng, n=4)
        product = ProductMdp(m, fga_gnc, constant_reward(0.5))
        d = induce_dtmc(product, random_policy(rng, product))
        estimate = simulate_buchi(d, rng, rollouts=10_000)
        assert abs(estimate - buchi_probability(d).initial) <= 0.02


def test_uncovered_state(gate_product, gate_policy):
    """Test that a policy missing a reachable state raises."""
    policy = dict(gate_policy)
    del policy[(gate_product.mdp.index(2, 5), 0)]
    with pytest.raises(PolicyCoverageError):
        induce_dtmc(gate_product, policy)


def test_unavailable_policy_action(gate, gate_product, gate_policy):
    """Test that a policy choosing an unavailable ε action raises."""
    policy = dict(gate_policy)
    policy[(gate.index(2, 9), 1)] = eps_action(1)
    with pytest.raises(PolicyCoverageError):
        induce_dtmc(gate_product, policy)


def test_mdp_optimum_on_gate(gate, fga_gnc):
    """Test the optimal satisfaction of the gate world."""
    assert optimal_satisfaction(gate, fga_gnc) == pytest.approx(0.8, abs=1e-9)


def test_mdp_optimum_dominates_policy(gate_product, gate_policy):
    """Test that the optimum is attained by the hand-made gate policy."""
    product = enumerate_product(*gate_product)
    optimum = mdp_max_buchi_probability(product)
    d = induce_dtmc(gate_product, gate_policy)
    assert optimum == pytest.approx(buchi_probability(d).initial, abs=1e-9)


def test_accepting_mec_on_gate(gate, fga_gnc):
    """Test that the only accepting end component is the `a` sink."""
    product = enumerate_product(gate, fga_gnc, constant_reward(1.0))
    accepting = [
        mec for mec in maximal_end_components(product)
        if any(product.is_accepting(i) for i in mec)
    ]
    assert accepting
    assert all(
        product.states[i].s == gate.index(2, 9) for mec in accepting for i in mec
    )


def test_prism_gate_round_trip(gate_product, gate_policy):
    """Test that exporting a parsed PRISM model reproduces the text."""
    d = induce_dtmc(gate_product, gate_policy)
    text = export_prism(d)
    assert export_prism(parse_prism(text)) == text
    lines = text.splitlines()
    assert lines[:3] == ["dtmc", "", "module ProductMDP"]
    assert any(" 0.8 : " in line and "0.2 : " in line for line in lines)
    assert 'label "accepting"' in text


def test_prism_rows_sum_to_one(gate_product, gate_policy):
    """Test that parsed PRISM rows are distributions."""
    parsed = parse_prism(export_prism(induce_dtmc(gate_product, gate_policy)))
    for i in range(parsed.n):
        assert abs(sum(r.probability for r in parsed.row(i)) - 1.0) <= 1e-12


def test_prism_single_state():
    """Test the exact PRISM text of a one-state chain."""
    d = Dtmc.from_rows([[Row(0, 1.0)]], accepting=[True])
    assert export_prism(d) == (
        "dtmc\n\nmodule ProductMDP\n  m : [0..0] init 0;\n"
        "  [] (m=0) -> 1 : (m'=0);\nendmodule\n\n"
        'label "accepting" = (m=0);\n'
    )


def test_prism_rejects_unknown_construct():
    """Test that constructs outside the exported subset raise PrismFormatError."""
    with pytest.raises(PrismFormatError) as exc:
        parse_prism("dtmc\nmodule ProductMDP\n  x : bool init false;\nendmodule\n")
    assert exc.value.line == 3
    with pytest.raises(PrismFormatError):
        parse_prism("dtmc\nmodule ProductMDP\nendmodule\n")


def test_dump_jsonl(gate_product, gate_policy):
    """Test the JSON lines dump of the gate chain."""
    d = induce_dtmc(gate_product, gate_policy)
    records = [json.loads(line) for line in dump_jsonl(d).splitlines()]
    assert len(records) == len(d.targets)
    assert set(records[0]) == {"from", "to", "p", "reward", "discount"}
    gate_rows = [r for r in records if r["p"] == pytest.approx(0.2)]
    assert len(gate_rows) == 1
