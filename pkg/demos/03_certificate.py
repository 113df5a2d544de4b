# The full argument as a report, and the isomorphism kG -> kH written to a
# file that can be re-checked independently.
#
#   python3 demos/03_certificate.py [out_dir]

# %%
import json
import sys
import tempfile
from pathlib import Path

from mipcert.gf2 import Gf2Matrix
from mipcert.mipverify import IsoCertificate, run_pipeline, verify_certificate

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())

report, cert = run_pipeline(4, 3, seed=0)
for s in report.steps:
    print(f"{s.status:9s} {s.name}")
print("all verified:", report.ok)

# %% write the certificate and the report
path = out_dir / "cert_4_3.txt"
path.write_text(cert.to_text())
(out_dir / "report_4_3.json").write_text(json.dumps(report.to_dict(), indent=2))
print("wrote", path, f"({path.stat().st_size} bytes)")
print(path.read_text().splitlines()[0])

# %% re-check from the file alone
check = verify_certificate(path.read_text())
print("re-check:", check.ok, check.details["multiplicative"]["mode"], check.details["multiplicative"]["pairs"], "pairs")

# %% one flipped bit is caught even with a fresh checksum
bits = cert.matrix.to_bits()
bits[42, 7] ^= True
tampered = IsoCertificate(4, 3, Gf2Matrix.from_bits(bits))
print("tampered:", verify_certificate(tampered.to_text()).reasons)

# %% a sabotaged yt: drop the trailing c
bad, _ = run_pipeline(4, 3, yt_literal="b(a+b+ab)", with_fingerprints=False)
print("sabotaged yt fails:", bad.to_dict()["failed"])
