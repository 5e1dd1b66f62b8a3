"""Build the (1,2,3) blowup diagram of a smooth point and expand it into elementary steps."""

from mmpfactor import ContractionDescriptor, build_diagram
from mmpfactor.machine import MapState, factorize, termination_certificate

print(build_diagram(ContractionDescriptor.of("Ia", m=2, n=3)).text())

trace = factorize(MapState.smooth_blowup(2, 3))
for path, node in trace.walk():
    pad = "  " * len(path)
    print(pad + (f"leaf {node.leaf.value}" if node.is_leaf else f"{node.rule}  {node.root}"))
cert = termination_certificate(trace)
print(f"certificate valid: {cert.valid}, leaves: {cert.leaf_counts}")
