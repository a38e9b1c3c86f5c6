import sentry_sdk
from sentry_sdk.integrations.fastapi import FastApiIntegration
from sentry_sdk.integrations.logging import LoggingIntegration

IGNORE_PATHS = {"/health"}


def init_sentry(
    dsn: str,
    environment: str = "dev",
    release: str | None = None,
    traces_sample_rate: float = 0.2,
    profiles_sample_rate: float = 0.0,
    send_default_pii: bool = False,
    with_fastapi: bool = True,
):
    integrations = [LoggingIntegration(level=None, event_level="ERROR")]
    if with_fastapi:
        integrations.append(FastApiIntegration())
    sentry_sdk.init(
        dsn=dsn,
        environment=environment,
        release=release,
        send_default_pii=send_default_pii,
        integrations=integrations,
        traces_sample_rate=traces_sample_rate,
        profiles_sample_rate=profiles_sample_rate,
        max_breadcrumbs=200,
        before_send_transaction=_drop_health_transactions,
    )


def _drop_health_transactions(event, hint=None):
    name = event.get("transaction")
    if name and any(p in str(name) for p in IGNORE_PATHS):
        return None
    return event
