"""Start a mock gain endpoint plus a gateway for the integration test.

Prints one JSON line {"gateway": url, "endpoint": url} on stdout, then
blocks until stdin closes.
"""

import json
import sys
import tempfile
from pathlib import Path

from harpkit import gateway, mock_endpoint


def main() -> None:
    behavior = mock_endpoint.MockBehavior(variant="gain", artificial_delay=0.6)
    endpoint = mock_endpoint.run_mock_endpoint(behavior, port=0)
    registry = Path(tempfile.mkdtemp()) / "registry.txt"
    registry.write_text(f"gain-mock = {endpoint.url}\n")
    handle = gateway.serve_gateway(port=0, registry_path=str(registry))
    print(json.dumps({"gateway": handle.url, "endpoint": endpoint.url}), flush=True)
    sys.stdin.read()  # exit when the parent closes our stdin
    handle.close()
    endpoint.close()


if __name__ == "__main__":
    main()
