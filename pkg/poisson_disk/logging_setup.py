import logging
import sys

from poisson_disk.settings import Settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
STREAM_HANDLER_NAME = "poisson-disk-stream"
CLOUD_HANDLER_NAME = "poisson-disk-cloud"


def _installed(root: logging.Logger, name: str) -> bool:
    return any(h.get_name() == name for h in root.handlers)


def configure_logging(settings: Settings) -> logging.Logger:
    """Configure the root logger: stderr always, Google Cloud Logging when enabled."""
    root = logging.getLogger()
    root.setLevel(settings.log_level)

    if not _installed(root, STREAM_HANDLER_NAME):
        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(logging.Formatter(LOG_FORMAT))
        stream.set_name(STREAM_HANDLER_NAME)
        root.addHandler(stream)

    if settings.cloud_logging and settings.cloud_project and not _installed(root, CLOUD_HANDLER_NAME):
        # optional dependency, only needed when shipping logs
        import google.cloud.logging
        from google.cloud.logging.handlers import CloudLoggingHandler

        client = google.cloud.logging.Client(project=settings.cloud_project)
        handler = CloudLoggingHandler(client, name="poisson-disk")
        handler.set_name(CLOUD_HANDLER_NAME)
        root.addHandler(handler)
        logging.info("Shipping logs to Cloud Logging project %s", settings.cloud_project)
    return root
