"""Walkthrough 5: the whole loop over HTTP.

Trains a forest, writes its artifact and background CSV, starts the
service in a subprocess, and drives it the way the web UI does: predict,
explain, ask for an alternative crop, re-predict the alternative.
"""

import json
import subprocess
import sys
import tempfile
import time
import urllib.request
from pathlib import Path

from croprec import datagen, generate_dataset, stratified_split
from croprec.models import ModelKind, default_params, save_model, train_model

PORT = 8765
READING = [44, 60, 55, 34.28046, 90.555618, 6.825371, 98.540474]


def post(path, body):
    req = urllib.request.Request(f"http://127.0.0.1:{PORT}{path}",
                                 data=json.dumps(body).encode(),
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


workdir = Path(tempfile.mkdtemp(prefix="croprec-demo-"))
dataset = generate_dataset(seed=7)
train, _ = stratified_split(dataset, 0.30, seed=42)
model = train_model(ModelKind.RF, default_params(ModelKind.RF), train, seed=42)
save_model(model, workdir / "rf.model")
datagen.write_csv(train, workdir / "background.csv")
print(f"artifact and background written under {workdir}")

proc = subprocess.Popen([sys.executable, "-m", "croprec.cli", "serve",
                         "--model", str(workdir / "rf.model"),
                         "--background", str(workdir / "background.csv"),
                         "--port", str(PORT)],
                        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
try:
    for _ in range(60):  # wait for the bind
        try:
            with urllib.request.urlopen(f"http://127.0.0.1:{PORT}/v1/health") as r:
                if json.loads(r.read())["status"] == "ok":
                    break
        except OSError:
            time.sleep(0.25)
    else:
        raise RuntimeError("service did not come up")
    print("service is healthy\n")

    pred = post("/v1/predict", {"features": READING})
    print("picked crop:", pred["predicted_crop"])

    attr = post("/v1/explain", {"features": READING, "method": "shap-exact"})
    pairs = sorted(zip(attr["feature_names"], attr["contributions"]),
                   key=lambda kv: -abs(kv[1]))
    print("top attributions:", ", ".join(f"{n} {v:+.3f}" for n, v in pairs[:3]))

    cf = post("/v1/counterfactual", {"features": READING, "target_class": "rice",
                                     "seed": 7})
    print("alternative-crop search:", cf["status"])
    if cf["status"] == "ok":
        best = cf["counterfactuals"][0]
        changes = {n: round(d, 2) for n, d in zip(attr["feature_names"], best["deltas"])
                   if d != 0}
        print("to grow rice instead, change:", changes)
        recheck = post("/v1/predict", {"features": best["features"]})
        print("re-predicting the changed reading:", recheck["predicted_crop"])
finally:
    proc.terminate()
    proc.wait(timeout=10)
    print("\nservice stopped")
