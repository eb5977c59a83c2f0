"""Drive the HTTP service end to end: upload, compile, play a full game.

Starts the service in-process on a local port, then talks to it exactly the
way the browser client does.
"""

import json
import tempfile
import threading
import time
import urllib.request

import uvicorn

from qcsp.service import create_app

PORT = 8765
BASE = f"http://127.0.0.1:{PORT}"

PROBLEM = {
    "variables": [
        {"name": "x", "quantifier": "exists", "domain": [0, 1, 2]},
        {"name": "y", "quantifier": "exists", "domain": [0, 1, 2]},
        {"name": "z", "quantifier": "forall", "domain": [0, 1, 2]},
        {"name": "t", "quantifier": "exists", "domain": [0, 1, 2]},
    ],
    "constraints": [{"type": "expr", "text": "x = y*z + t"}],
}


def call(method: str, path: str, body=None):
    data = None if body is None else json.dumps(body).encode()
    request = urllib.request.Request(
        BASE + path, data=data, method=method,
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


def main() -> None:
    data_dir = tempfile.mkdtemp(prefix="qcsp-demo-")
    config = uvicorn.Config(
        create_app(data_dir), host="127.0.0.1", port=PORT, log_level="error"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.05)

    problem_id = call("POST", "/problems", PROBLEM)["id"]
    compiled = call("POST", f"/problems/{problem_id}/compile")
    print("compiled:", compiled)

    state = call("POST", "/games", {"base_id": compiled["base_id"], "human_role": "exists"})
    session = state["id"]
    print("game opened; it is the human's turn at", state["turn"]["name"])

    while state["status"] == "ONGOING":
        moves = call("GET", f"/games/{session}/winning-moves")["values"]
        turn = state["turn"]["name"]
        chosen = moves[-1]
        whatif = call("POST", f"/games/{session}/whatif", {"value": chosen})
        print(f"turn {turn}: safe moves {moves}; what-if {chosen} -> {whatif['winning']}")
        state = call("POST", f"/games/{session}/move", {"value": chosen})
        played = ", ".join(f"{m['name']}={m['value']}" for m in state["prefix"])
        print(f"  after the engine's reply the prefix is [{played}]")

    print("final status:", state["status"])
    server.should_exit = True
    thread.join(timeout=5)


if __name__ == "__main__":
    main()
