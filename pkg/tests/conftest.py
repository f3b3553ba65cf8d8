import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# make the shared oracles module importable from every test file
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
