# Graphs, thresholds and the activation engine
