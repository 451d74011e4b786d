class TestPackage:
    def test_top_level_namespace(self):
        import sdlab as sdlab1
        assert sdlab1.WgUnet.__name__ == "WgUnet"
        assert sdlab1.spectral.__name__ == "sdlab.spectral"
        assert sdlab1.diffusion.__name__ == "sdlab.diffusion"
        assert sdlab1.__title__ == "sdlab"

    def test_submodule_namespace(self):
        import sdlab.analysis as analysis1
        assert analysis1.__name__ == "sdlab.analysis"

        from sdlab import distill as distill2
        assert distill2.__name__ == "sdlab.distill"

        from sdlab.spectral import dft2 as dft2_1
        assert dft2_1.__name__ == "dft2"

        from sdlab import Checkpoint
        assert Checkpoint.__name__ == "Checkpoint"

        from sdlab.lab.cli import main
        assert main.__name__ == "main"
