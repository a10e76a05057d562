# Graph, embedding and contraction-tree model
