# Utilities module
from src.utils.log_setup import configure_logging
