# k-binomial word toolkit package
