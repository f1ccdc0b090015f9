"""Rainbow structures in families of balanced bipartite graphs."""
