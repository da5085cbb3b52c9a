# behaviordict package
