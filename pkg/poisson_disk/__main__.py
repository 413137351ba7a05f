from poisson_disk.cli import main

raise SystemExit(main())
