"""Discounted objectives are continuous in the policy; limit averages and LTL are not.

Along pi_alpha (stay in s0 with probability 1 - alpha) the values below are
printed as alpha shrinks, next to the value at alpha = 0.

Run: python3 demos/continuity.py
"""

from objspec.objectives.evaluators import evaluate
from objspec.separations import continuity_probe, get_fixture

fx = get_fixture("ex_loop")
family = fx.families["pi_alpha"]
limit = family.build(family.limit)

print(f"{'alpha':>8}" + "".join(f"{name:>14}" for name in fx.objectives))
for alpha in family.grid:
    policy = family.build(alpha)
    print(f"{alpha:>8g}" + "".join(f"{evaluate(s, fx.env, policy):>14.6f}" for s in fx.objectives.values()))
print(f"{0:>8g}" + "".join(f"{evaluate(s, fx.env, limit):>14.6f}" for s in fx.objectives.values()))
print()
for name, spec in fx.objectives.items():
    rep = continuity_probe(fx.env, family.build, spec, family.grid, limit)
    verdict = "continuous" if rep.match else "jumps"
    print(f"{name:<14} extrapolated {rep.extrapolated:+.6f}  limit {rep.limit_value:+.6f}  -> {verdict}")
