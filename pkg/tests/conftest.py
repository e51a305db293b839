from hypothesis import strategies as st

from cosserat_soliton.params import MaterialParams


@st.composite
def admissible_params(draw, mu_c_min=0.0):
    """Random parameter sets with O(1) moduli that pass admissibility."""
    mu = draw(st.floats(0.1, 2.0))
    return MaterialParams(
        kappa1=draw(st.floats(0.1, 3.0)), kappa2=draw(st.floats(0.0, 1.0)),
        kappa3=draw(st.floats(0.0, 1.0)), chi1=draw(st.floats(-1.0, 1.0)),
        chi3=draw(st.floats(-1.0, 1.0)), rho=draw(st.floats(0.05, 2.0)),
        rho_rot=draw(st.floats(0.05, 2.0)), mu_c=draw(st.floats(mu_c_min, 2.0)),
        lam=draw(st.floats(-0.5 * mu, 3.0)), mu=mu)
