from hypothesis import HealthCheck, settings

settings.register_profile(
    "domscan",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("domscan")
