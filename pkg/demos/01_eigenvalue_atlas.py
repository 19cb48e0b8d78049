"""Eigenvalue structure of the mode matrix across frequency.

For each frequency magnitude k the dynamics of one mode are governed by
three eigenvalues, the roots of tau*lam^3 + lam^2 + beta*k^2*lam + k^2.
Their reality pattern changes with k: below sqrt(m1) and above sqrt(m2)
there is one real root and a conjugate pair; in between all three are real.
The thresholds m1, m2 come from the zeroes of the cubic's discriminant and
merge into a triple root when tau/beta hits 1/9.

Running this script prints the classification for a sub-critical, a
critical, and a super-critical parameter pair, then writes a
branch-continuous eigenvalue table to atlas.csv.
"""

import numpy as np

import mgt_spectral as mgt

for tau, beta in [(0.1, 1.0), (1.0 / 9.0, 1.0), (0.5, 1.0)]:
    p = mgt.validate(tau, beta)
    thr = mgt.cardano_thresholds(p)
    reg = mgt.regime(p)
    print(f"tau={tau:.4f} beta={beta}  ->  {reg.value}")
    if thr.m1 is not None:
        print(f"  thresholds: m1={thr.m1:.6f}, m2={thr.m2:.6f} "
              f"(sqrt: {np.sqrt(thr.m1):.4f}, {np.sqrt(thr.m2):.4f})")
    else:
        print("  thresholds absent: conjugate pair at every positive frequency")
    for k in (0.0, 1.0, 1.78, 2.5):
        pt = mgt.eigenvalues(p, k)
        lams = ", ".join(f"{z:.4f}" for z in pt.lambdas)
        print(f"  k={k:<5} {pt.pattern.value:<18} [{lams}]")
    print()

# A dense atlas with branch-continuous labeling. Each labeled sequence is a
# continuous function of k; the conjugate pair collides onto the real axis at
# sqrt(m1) and two real branches merge back into a pair at sqrt(m2).
p = mgt.validate(0.1, 1.0)
points = mgt.atlas(p, np.linspace(0.0, 4.0, 401))
with open("atlas.csv", "w", encoding="utf-8") as fh:
    fh.write("k,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3,pattern\n")
    for row in mgt.atlas_rows(points):
        fh.write(",".join(format(x, ".17g") for x in row[:7]) + f",{row[7]}\n")
print("wrote atlas.csv (plot re/im columns against k to see the branch collisions)")

# Both asymptotic regimes are quantitative: near k = 0 the pair behaves like
# +-ik - (beta-tau) k^2 / 2, and for large k its real part saturates at
# -(beta-tau)/(2 beta tau) while the real branch tends to -1/beta.
for k in (0.01, 1e3):
    exact = np.array(mgt.eigenvalues(p, k).lambdas)
    approx = np.array((mgt.asymptotic_small_k if k < 1 else mgt.asymptotic_large_k)(p, k).lambdas_approx)
    print(f"k={k:g}: max |exact - asymptotic| = {np.abs(exact - approx).max():.2e}")
