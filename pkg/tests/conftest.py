import pytest

from cbmsim.cost import CostParams
from cbmsim.degradation import DegradationParams
from cbmsim.engine import ScenarioConfig
from cbmsim.inventory import SpareRequirements
from cbmsim.policy import PolicyParams
from cbmsim.supply import Supplier


def make_degradation(**kw) -> DegradationParams:
    base = dict(alpha0=2.0, beta=2.0, L=30.0, gamma_rate=10.0, path_step=0.06)
    base.update(kw)
    return DegradationParams(**base)


def make_policy(**kw) -> PolicyParams:
    base = dict(M=20.0, K=3, T_reorder=15.0, S=3, Q=0.1, A_star=0.95)
    base.update(kw)
    return PolicyParams(**base)


def make_costs(**kw) -> CostParams:
    base = dict(c_ins=5.0, c_p0=60.0, c_c=200.0, c_d1=2.0, c_d2=20.0,
                c_h=0.1, c_o=10.0, c_oe=50.0, c_pur=30.0, eta=1.0)
    base.update(kw)
    return CostParams(**base)


def make_suppliers(p1=0.9, p2=0.95, pe=1.0, lt1=2.0, lt2=4.0, lte=15.0):
    return (
        Supplier(id="local_1", lead_time=lt1, availability_prob=p1, ordering_cost=10.0, kind="local"),
        Supplier(id="local_2", lead_time=lt2, availability_prob=p2, ordering_cost=12.0, kind="local"),
        Supplier(id="main", lead_time=lte, availability_prob=pe, ordering_cost=50.0, kind="main"),
    )


def make_config(replications=100, seed=20260823, **kw) -> ScenarioConfig:
    base = dict(
        degradation=make_degradation(),
        policy=make_policy(),
        costs=make_costs(),
        suppliers=make_suppliers(),
        requirements=SpareRequirements(),
        replications=replications,
        seed=seed,
    )
    base.update(kw)
    return ScenarioConfig(**base)


@pytest.fixture
def default_config():
    return make_config()
