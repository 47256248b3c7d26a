namespace storax {}
