# handlecert application package
