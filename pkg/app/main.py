from fastapi.applications import FastAPI
from app.configs.setup import create_app

app: FastAPI = create_app()
