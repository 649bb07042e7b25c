from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict
import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ENV_FILE_PATH = os.path.join(BASE_DIR, "..", "tkp.env")

class Settings(BaseSettings):

    model_config = SettingsConfigDict(
        env_file=ENV_FILE_PATH,
        extra='ignore'
    )

    PROJECT_NAME: str = "TKPSVD Toolkit"

    # Numerical tolerances (relative)
    SVD_TOL: float = 1e-12
    STRUCTURE_TOL: float = 1e-10
    MULTIPLET_GAP: float = 1e-8

    # TTr1 switches to log-sums of sigma products beyond this tree depth
    LOG_SUM_DEPTH: int = 8

    # SVD pre-reduces by QR when rows exceed this multiple of the columns
    TALL_SKINNY_RATIO: int = 4

    # Terms per Khatri-Rao block when rebuilding a tensor from its terms
    RECONSTRUCT_CHUNK: int = 512

    # Largest permutation materialized as a dense matrix
    DENSE_PERMUTATION_LIMIT: int = 4096

    # Images
    MAX_PIXEL: float = 255.0

    LOG_LEVEL: str = "WARNING"

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # the CLI reads no process environment, only tkp.env
        return init_settings, dotenv_settings

settings = Settings()
