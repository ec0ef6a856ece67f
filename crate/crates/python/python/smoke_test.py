"""Quick check of the compiled extension: run after `maturin develop` or installing the wheel."""

import math

import lowgirth


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


fig_b = lowgirth.Graph("fig-b")
assert fig_b.num_categories == 2 and fig_b.num_classes == 2

params = lowgirth.Params.qaoa(fig_b, [0.2617], [0.3927])
close(lowgirth.cut_fraction(fig_b, params), 0.66238, 1e-4)

fig_a = lowgirth.Graph("fig-a")
close(lowgirth.cut_fraction(fig_a, lowgirth.Params.qaoa(fig_a, [0.0], [0.0])), 0.5, 1e-12)
ma = lowgirth.Params.ma(fig_a, [0.1901, 0.3195], [0.3814])
close(lowgirth.cut_fraction(fig_a, ma), 0.65172, 1e-3)

value, best = lowgirth.optimize(fig_a, 1, "qaoa", starts=8)
close(value, 0.64590, 1e-3)
assert best.p == 1

tiling = lowgirth.Graph("tiling-3-4-6")
close(lowgirth.cut_fraction(tiling, lowgirth.Params.qaoa(tiling, [0.2536], [0.3662])), 0.64590, 1e-3)

close(lowgirth.threshold_closed_form(3, 3), 0.6875, 0.0)
v, se = lowgirth.threshold(fig_a, [3], samples=200_000)
close(v, 0.6016, 5 * se + 1e-3)
taus, v, _ = lowgirth.best_thresholds(fig_a, 1)
assert taus in ([3], [4]), taus
v, se = lowgirth.bm(fig_b, 2, "para1", samples=200_000)
close(v, 0.733, 0.005)

for est, se in lowgirth.qmc_edges(fig_a, [0.0], [0.0], [0.0], [0.0], samples=2000):
    assert math.isfinite(est) and abs(est - 0.5) <= 4 * se + 1e-9

try:
    lowgirth.Graph("nope")
except ValueError:
    pass
else:
    raise AssertionError("unknown graph accepted")

print("smoke test ok")
