# Chamber Basis - Orlik-Solomon chamber basis and local-system complexes of real arrangements
