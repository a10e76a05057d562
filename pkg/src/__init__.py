# carveorder - carving-width contraction ordering for planar tensor networks
