"""Which formalisms can reward doing A then B, or B then A, but not AA or BB?

Run: python3 demos/xor_separation.py
"""

from objspec.objectives.evaluators import evaluate
from objspec.separations import get_fixture, mr_lp_check, rrl_lp_check, run_separation

fx = get_fixture("ex_xor")
target = fx.targets[0]
policies = [fx.policy(p) for p in target.policies]

print(f"environment: states {fx.env.states}, actions {fx.env.actions}")
print(f"target ordering over {', '.join(target.policies)}")
print()
print(f"{'objective':<12}" + "".join(f"{p:>10}" for p in target.policies))
for name in ("onmr_abs", "rm_xor", "ltl_xor"):
    spec = fx.objective(name)
    print(f"{name:<12}" + "".join(f"{evaluate(spec, fx.env, p):>10.4f}" for p in policies))
print()

# No Markovian reward at any grid discount reproduces the ordering.
for label, check in (("MR", mr_lp_check), ("RRL", rrl_lp_check)):
    res = check(fx.env, policies, target.constraint, fixture_gamma=fx.gamma)
    best = max(t for _, t in res.report) + 0.0  # avoid printing -0
    print(f"{label}: {res.status} over {len(res.report)} discounts (best margin {best:.2e})")

report = run_separation(fx)
print(f"\nfull replay: {len(report.checks)} checks, {'pass' if report.passed else 'FAIL'}")
