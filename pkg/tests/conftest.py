import pytest

from drgroupoid import fixtures as fx


@pytest.fixture(params=sorted(fx.SYSTEMS))
def fixture_system(request):
    return fx.SYSTEMS[request.param]
