# Graph generation, the end-to-end pipeline and the benchmark harness
