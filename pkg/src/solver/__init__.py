# Width search, tree construction, sequencing and exact oracles
