#!/usr/bin/env python3
"""Extended-precision reference values for the frozen test constants.

Everything here is computed at 60 decimal digits with mpmath, independently
of the package code: shape parameters from the closed forms, face normals by
solving the orthogonality system (never by trusting a printed formula),
dihedral angles, tilts via the support-plane construction, and a direct
convex-hull certificate for canonicality (every neighbouring truncation pole
must lie strictly beyond the supporting hyperplane of the piece's own poles).

Two algebraic variants of the tilt closed forms are evaluated:

* the "reference" forms, whose second factors are (c - sqrt(1-c)) and
  sqrt(1-c)(1+c)(2c - sqrt(1-c));
* the "reduced" forms obtained by symbolically reducing the support-plane
  computation, with factors (2c - 1) and (1-c)(1+c)(2c-1).

The reduced forms agree with the support-plane tilts to working precision;
the reference forms have the same signs but different values.  Both are
printed so the discrepancy is on record.

Run:  python scripts/highprec_reference.py [n ...]
"""

import sys

from mpmath import acosh, acos, asin, cos, lu_solve, matrix, mp, mpf, nstr, pi, sqrt

mp.dps = 60


def solve_params(n):
    c = cos(pi / n)
    if n % 3 == 0:
        h = sqrt(1 + c) * sqrt(2 * c - 1) / (sqrt(1 - c) * sqrt(2 * c + 1))
    else:
        h = sqrt(1 + c) * sqrt(sqrt(8 * c**2 + 1) - 3 * c) / (1 - c)
    r = sqrt(2 * c - 1 + (1 - c) ** 2 * h**2) / c
    st = (1 - c) * h / ((1 + c) * r)
    return c, h, r, st


def mink(a, b):
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]


def unit(a):
    s = sqrt(mink(a, a))
    return [x / s for x in a]


def twist(n, inverse=False):
    c = cos(pi / n)
    s = sqrt(1 - c**2)
    if inverse:
        s = -s
    return [[1, 0, 0, 0], [0, c, s, 0], [0, -s, c, 0], [0, 0, 0, -1]]


def apply(v, m):
    return [sum(v[i] * m[i][j] for i in range(4)) for j in range(4)]


def normal(p, q, r, interior):
    # Lorentzian cross product: w with <w,p> = <w,q> = <w,r> = 0,
    # oriented outward so that <w, interior> < 0.
    g = [-1, 1, 1, 1]
    rows = [p, q, r]

    def minor(skip):
        cols = [j for j in range(4) if j != skip]
        m = [[rows[i][j] for j in cols] for i in range(3)]
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    u = [(-1) ** i * minor(i) for i in range(4)]
    w = unit([g[i] * u[i] for i in range(4)])
    if mink(w, interior) > 0:
        w = [-x for x in w]
    return w


def realization(n):
    c, h, r, st = solve_params(n)
    ct = sqrt(1 - st**2)
    N = twist(n)
    tau = unit([1, 0, 0, h])
    ups = apply(tau, N)
    alp = unit([1, r * ct, 0, r * st])
    dlt = apply(alp, N)
    pts = [tau, ups, alp, dlt]
    cen = [mpf(1)] + [sum(p[i] / p[0] for p in pts) / 4 for i in (1, 2, 3)]
    gam = normal(alp, dlt, ups, cen)
    bet = normal(tau, alp, dlt, cen)
    bet_twist = apply(gam, N)
    eps = normal(tau, alp, ups, cen)
    phi = normal(tau, dlt, ups, cen)
    return dict(
        n=n, c=c, h=h, r=r, st=st,
        tau=tau, ups=ups, alp=alp, dlt=dlt,
        bet=bet, bet_twist=bet_twist, gam=gam, eps=eps, phi=phi, cen=cen,
    )


def support_vector(poles, kappa):
    # q with <q, v> = kappa for all four poles
    A = matrix(4, 4)
    g = [-1, 1, 1, 1]
    for i, v in enumerate(poles):
        for j in range(4):
            A[i, j] = g[j] * v[j]
    q = lu_solve(A, matrix([kappa] * 4))
    return [q[i] for i in range(4)]


def tilts_gram(R):
    faces = [R["bet"], R["gam"], R["eps"], R["phi"]]
    # each face paired with the truncation pole of the vertex it faces,
    # i.e. the one vertex of the piece not lying on the face's plane
    poles = [R["ups"], R["tau"], R["dlt"], R["alp"]]
    G = matrix(4, 4)
    for i in range(4):
        for j in range(4):
            G[i, j] = mink(faces[i], faces[j])
    rhs = matrix([-1 / mink(faces[i], poles[i]) for i in range(4)])
    t = G * rhs
    return [t[i] for i in range(4)]


def tilts_closed(n, reduced):
    c, h, _, _ = solve_params(n)
    H2 = (1 + c) * ((1 - c) * h**2 + (1 + c) * (2 * c - 1)) + h**2 * (1 - c) * (
        1 + c - (1 - c) * (2 * c + 1) * h**2
    )
    H3 = (h**2 - 1) / ((1 + c) ** 2 * (2 * c - 1) + (1 - c) ** 2 * (2 * c + 1) * h**2)
    if reduced:
        brace = (1 - c) ** 2 * (2 * c + 1) * h**2 + (1 - c) * (1 + c) * (2 * c - 1)
        scalar = 2 * c - 1
    else:
        brace = (1 - c) ** 2 * (2 * c + 1) * h**2 + sqrt(1 - c) * (1 + c) * (
            2 * c - sqrt(1 - c)
        )
        scalar = c - sqrt(1 - c)
    tb = -h * sqrt(H3 / H2) * brace
    te = -sqrt(H3) * sqrt(1 - c) * sqrt(1 + c) * scalar
    return tb, te, H2, H3


def lorentz_from_frames(src, dst):
    # row-vector convention: L with  s L = d  for each frame pair
    S = matrix(4, 4)
    D = matrix(4, 4)
    for i in range(4):
        for j in range(4):
            S[i, j] = src[i][j]
            D[i, j] = dst[i][j]
    L = S**-1 * D
    return [[L[i, j] for j in range(4)] for i in range(4)]


def hull_certificate(R):
    """Neighbour poles across all four faces, paired with <w, q>.

    q is the support vector of the piece's own poles normalised to
    <q, pole> = 1; the decomposition is canonical iff every neighbour
    pole w satisfies <w, q> > 1.
    """
    n = R["n"]
    tau, ups, alp, dlt = R["tau"], R["ups"], R["alp"], R["dlt"]
    bet, gam = R["bet"], R["gam"]
    q = support_vector([tau, ups, alp, dlt], 1)
    w_near = apply(alp, twist(n, inverse=True))
    w_far = apply(dlt, twist(n))
    L_up = lorentz_from_frames([alp, dlt, ups, gam], [tau, alp, dlt, [-x for x in bet]])
    w_up = apply(tau, L_up)
    L_dn = lorentz_from_frames([dlt, alp, tau, bet], [ups, dlt, alp, [-x for x in gam]])
    w_dn = apply(ups, L_dn)
    return q, dict(near_side=mink(w_near, q), far_side=mink(w_far, q),
                   upper=mink(w_up, q), lower=mink(w_dn, q))


def report(n):
    R = realization(n)
    c, h, r, st = R["c"], R["h"], R["r"], R["st"]
    tau, ups, alp, dlt = R["tau"], R["ups"], R["alp"], R["dlt"]
    bet, gam, eps, phi = R["bet"], R["gam"], R["eps"], R["phi"]

    def p(label, val, d=30):
        print(f"  {label:<30} {nstr(val, d)}")

    print(f"n = {n}  (case {'div3' if n % 3 == 0 else 'not_div3'})")
    p("c_n", c)
    p("h", h)
    p("r", r)
    p("sin_theta", st)
    p("theta", asin(st))
    p("<top,mid_up>", mink(tau, alp))
    p("<mid_up,mid_dn>", mink(alp, dlt))
    p("slant edge length", acosh(-mink(tau, alp)))
    p("planarity <mid_up_next,up>", mink(apply(dlt, twist(n)), bet))
    p("<near,far> (expect -c)", mink(eps, phi))
    p("<upper,far> (expect 0)", mink(bet, phi))
    xi = acos(-mink(bet, eps))
    zeta = acos(-mink(bet, gam))
    p("slant dihedral (xi)", xi)
    p("equator dihedral (zeta)", zeta)
    factor = 3 if n % 3 == 0 else 1
    p("angle-sum residual", 2 * n * (2 * xi + zeta) / factor - 2 * pi)
    p("upper normal vs twisted lower", max(abs(R["bet"][i] - R["bet_twist"][i]) for i in range(4)))
    tg = tilts_gram(R)
    p("tilt upper  (gram)", tg[0])
    p("tilt lower  (gram)", tg[1])
    p("tilt near   (gram)", tg[2])
    p("tilt far    (gram)", tg[3])
    for name, reduced in (("reference", False), ("reduced", True)):
        tb, te, H2, H3 = tilts_closed(n, reduced)
        p(f"tilt upper ({name} form)", tb)
        p(f"tilt near  ({name} form)", te)
        p(f"  diff vs gram upper", tb - tg[0])
        p(f"  diff vs gram near", te - tg[2])
    q, cert = hull_certificate(R)
    for k, v in cert.items():
        p(f"hull margin across {k}", v - 1)
    print()


if __name__ == "__main__":
    ns = [int(a) for a in sys.argv[1:]] or [4, 5, 6, 7, 9, 12, 30, 100]
    for n in ns:
        report(n)
