# behaviordict tests
