# src/config.py
import os
from dotenv import load_dotenv

load_dotenv()

# Worker threads for per-degree evaluation (0 = sequential, the reproducibility baseline)
_threads_str = os.getenv("GVKIT_THREADS", "0").strip()
GVKIT_THREADS: int = int(_threads_str) if _threads_str.isdigit() else 0

LOG_LEVEL = os.getenv("GVKIT_LOG_LEVEL", "WARNING").upper()

# Extra t-order added on top of 2G+2 when a command does not pass --trunc
_slack_str = os.getenv("GVKIT_DEFAULT_T_SLACK", "0").strip()
DEFAULT_T_SLACK: int = int(_slack_str) if _slack_str.isdigit() else 0
if DEFAULT_T_SLACK % 2:
    DEFAULT_T_SLACK += 1
