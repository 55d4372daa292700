from watkins.main import main

main()
