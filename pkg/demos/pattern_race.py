"""Pattern waiting times and first-occurrence races.

Walks from single-pattern expected times (closed form vs exact automaton
vs simulation) to the full alternating-vs-runs race whose previously
reported probabilities disagree with the exact solution; the comparison
report prints every pipeline side by side and flags the gap.
"""

from jumpkit import (
    MarkovChain,
    alternating_run_race_report,
    automaton_expected_time,
    derive_stream,
    expected_time_iid,
    expected_time_markov,
    race_solve,
    run_race_probability,
    simulate_pattern_race,
)

root = derive_stream(11, 0)
fair = {0: 0.5, 1: 0.5}

print("=== expected waiting times, fair coin ===")
for pattern in [(1,), (1, 0), (1, 1), (1, 0, 1)]:
    closed = expected_time_iid(pattern, fair, strict=False)
    oracle = automaton_expected_time(pattern, fair)
    print(f"  {str(pattern):15s} closed form {closed:7.2f}   automaton {oracle:7.2f}")

print()
print("=== Markov-modulated symbols ===")
chain = MarkovChain([[0.9, 0.1], [0.5, 0.5]])
for pattern in [(0, 1), (1, 1), (0, 0)]:
    closed = expected_time_markov(pattern, chain)
    oracle = automaton_expected_time(pattern, chain, last_symbol=pattern[-1])
    print(f"  {str(pattern):15s} closed form {closed:7.2f}   automaton {oracle:7.2f}")

print()
print("=== two-pattern races ===")
for a, b in [(((1, 1)), ((0, 0))), (((0, 1, 1)), ((1, 1, 1)))]:
    result = race_solve([a, b], fair)
    sim = simulate_pattern_race([a, b], fair, 100_000, root.substream(hash((a, b)) % 997))
    print(f"  {a} vs {b}: P_first = {result.probabilities[0]:.4f}"
          f"  (MC {sim.probabilities[0]:.4f} +- {sim.prob_stderr[0]:.4f})"
          f"  E[T_min] = {result.expected_min_time:.2f}")

print()
print("=== run races: n ones before m zeros ===")
for n, m, p in [(2, 3, 0.5), (3, 3, 0.5), (4, 2, 0.35)]:
    print(f"  n={n}, m={m}, p={p}: {run_race_probability(n, m, p):.4f}")

print()
print("=== the alternating-vs-runs showcase (n=5, m=6, fair coin) ===")
report = alternating_run_race_report(5, 6, 0.5, 200_000, root.substream(1))
for line in report.lines():
    print("  " + line)
